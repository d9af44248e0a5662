#include <doctest.h>

#include <random>

#include "ncl/dataset.hpp"
#include "ncl/dof.hpp"
#include "ncl/ensemble.hpp"
#include "ncl/gram.hpp"
#include "ncl/random.hpp"
#include "ncl/rff.hpp"

namespace {

struct SmallProblem {
    ncl::RffEnsemble basis;
    Eigen::MatrixXd phi;
    Eigen::VectorXd y;
    ncl::GramBundle gram;
    ncl::WhitenedGram wg;
};

SmallProblem make_problem(Eigen::Index n, Eigen::Index d, Eigen::Index h, int m,
                          std::uint64_t seed) {
    SmallProblem p;
    ncl::SynthSpec spec;
    spec.n = n;
    spec.dims = d;
    spec.sigma = 0.2;
    spec.seed = seed;
    const ncl::SynthDataset synth = ncl::synthesize(spec);
    p.basis = ncl::sample_rff(d, h, m, 0.8, seed + 1);
    p.phi = ncl::evaluate(p.basis, synth.dataset.features);
    p.y = synth.dataset.targets.col(0);
    p.gram = ncl::compute_gram(p.phi, p.y, m);
    p.wg = ncl::whiten(p.gram);
    return p;
}

} // namespace

TEST_CASE("single member single feature collapses to least squares") {
    // phi(x) = x on the points {(1,2),(2,4)}: the exact fit has slope 2 at any
    // diversity level, since one member makes the diversity term vanish.
    Eigen::MatrixXd phi(1, 2);
    phi << 1, 2;
    Eigen::VectorXd y(2);
    y << 2, 4;
    const ncl::GramBundle g = ncl::compute_gram(phi, y, 1);
    const ncl::WhitenedGram wg = ncl::whiten(g);
    for (double lambda : {0.0, 0.3, 0.7, 1.0}) {
        const ncl::FittedEnsemble fe = ncl::fit(wg, g, lambda);
        CHECK(fe.beta(0) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(fe.member_weight(0)(0) == doctest::Approx(2.0).epsilon(1e-12));
    }
    CHECK_THROWS(ncl::fit(wg, g, 1.2));
    CHECK_THROWS(ncl::fit(wg, g, -0.1));
}

TEST_CASE("full diversity is least squares on the stacked features") {
    const SmallProblem p = make_problem(30, 2, 2, 3, 5);
    const ncl::FittedEnsemble fe = ncl::fit(p.wg, p.gram, 1.0);
    const Eigen::VectorXd residuals = p.phi.transpose() * fe.beta - p.y;
    // normal equations: residuals orthogonal to every feature row
    CHECK((p.phi * residuals / 30.0).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("prediction identities") {
    const SmallProblem p = make_problem(25, 2, 3, 4, 7);
    ncl::FittedEnsemble fe = ncl::fit(p.wg, p.gram, 0.6);

    ncl::SynthSpec probe_spec;
    probe_spec.n = 10;
    probe_spec.dims = 2;
    probe_spec.seed = 99;
    const Eigen::MatrixXd probe = ncl::synthesize(probe_spec).dataset.features;

    const ncl::Predictions preds = ncl::predict(fe, p.basis, probe);
    CHECK(preds.members.rows() == 4);
    CHECK(preds.ensemble.size() == 10);
    // ensemble output equals the mean of the members and the stacked form
    const Eigen::VectorXd mean_of_members = preds.members.colwise().mean();
    CHECK((preds.ensemble - mean_of_members).cwiseAbs().maxCoeff() <= 1e-10);
    const Eigen::VectorXd stacked =
        ncl::predict_stacked(fe, ncl::evaluate(p.basis, probe));
    CHECK((preds.ensemble - stacked).cwiseAbs().maxCoeff() <= 1e-10);

    SUBCASE("zero coefficients predict zero") {
        fe.beta.setZero();
        const ncl::Predictions zero = ncl::predict(fe, p.basis, probe);
        CHECK(zero.ensemble.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("opposite members cancel in the ensemble") {
        REQUIRE(fe.members == 4);
        ncl::FittedEnsemble cancel = fe;
        const Eigen::Index h = fe.features_per_member;
        cancel.members = 2;
        cancel.beta = Eigen::VectorXd(2 * h);
        cancel.beta.head(h) = fe.beta.head(h);
        cancel.beta.tail(h) = -fe.beta.head(h);
        ncl::RffEnsemble basis2 = p.basis;
        basis2.frequencies = {p.basis.frequencies[0], p.basis.frequencies[0]};
        basis2.phases = {p.basis.phases[0], p.basis.phases[0]};
        const ncl::Predictions out = ncl::predict(cancel, basis2, probe);
        CHECK(out.members.cwiseAbs().maxCoeff() > 1e-3);
        CHECK(out.ensemble.cwiseAbs().maxCoeff() <= 1e-12);
    }
    SUBCASE("mismatched basis rejected") {
        ncl::RffEnsemble other = ncl::sample_rff(2, 3, 5, 0.8, 1);
        CHECK_THROWS(ncl::predict(fe, other, probe));
    }
}

TEST_CASE("smoother matrix") {
    const SmallProblem p = make_problem(40, 2, 2, 3, 9);
    for (double lambda : {0.0, 0.5, 1.0}) {
        const ncl::SmootherMatrix sm = ncl::smoother_matrix(p.wg, p.phi, lambda);
        CHECK((sm.s - sm.s.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sm.s, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
        CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-10);
        // the smoother reproduces the fitted training values
        const ncl::FittedEnsemble fe = ncl::fit(p.wg, p.gram, lambda);
        const Eigen::VectorXd via_smoother = sm.s * p.y;
        CHECK((via_smoother - ncl::predict_stacked(fe, p.phi)).cwiseAbs().maxCoeff() <= 1e-8);
        // and its trace is the effective degrees of freedom
        CHECK(sm.s.trace() ==
              doctest::Approx(ncl::df_analytic(p.wg, p.gram, lambda)).epsilon(1e-8));
    }
    CHECK_THROWS(ncl::smoother_matrix(p.wg, p.phi, 0.5, /*n_guard=*/10));

    SUBCASE("single member at zero diversity is the hat matrix") {
        const SmallProblem solo = make_problem(30, 2, 4, 1, 13);
        const ncl::SmootherMatrix sm = ncl::smoother_matrix(solo.wg, solo.phi, 0.0);
        CHECK(sm.s.trace() == doctest::Approx(4.0).epsilon(1e-8));
        // hat matrices are idempotent
        CHECK(((sm.s * sm.s) - sm.s).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("loss and decomposition closed cases") {
    Eigen::VectorXd members(2);
    members << 1, 3;
    CHECK(ncl::ncl_loss(members, 2.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(ncl::ncl_loss(members, 2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ncl::ncl_loss(members, 2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));

    const ncl::DecompositionReport rep = ncl::ambiguity(members, 2.0);
    CHECK(rep.ensemble_error == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(rep.average_member_error == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rep.diversity == doctest::Approx(1.0).epsilon(1e-15));

    const ncl::DecompositionReport all_right =
        ncl::ambiguity(Eigen::VectorXd::Constant(3, 2.0), 2.0);
    CHECK(all_right.ensemble_error == 0.0);
    CHECK(all_right.average_member_error == 0.0);
    CHECK(all_right.diversity == 0.0);
}

TEST_CASE("loss forms and decomposition identity under fuzzing") {
    auto rng = ncl::make_rng(15);
    std::normal_distribution<double> gauss(0.0, 2.0);
    std::uniform_real_distribution<double> lam(0.0, 1.0);
    for (int rep = 0; rep < 500; ++rep) {
        const int m = 1 + rep % 7;
        Eigen::VectorXd preds(m);
        for (int i = 0; i < m; ++i) preds(i) = gauss(rng);
        const double y = gauss(rng);
        const double lambda = lam(rng);

        const ncl::DecompositionReport r = ncl::ambiguity(preds, y);
        CHECK(std::abs(r.ensemble_error - (r.average_member_error - r.diversity)) <= 1e-12);
        CHECK(r.diversity >= 0.0);

        const double f = preds.mean();
        const double alt = (1.0 - lambda) * (preds.array() - y).square().sum() / m +
                           lambda * (f - y) * (f - y);
        CHECK(std::abs(ncl::ncl_loss(preds, y, lambda) - alt) <= 1e-12);
    }
}

TEST_CASE("error metrics") {
    Eigen::VectorXd y(3);
    y << 1, 2, 3;
    CHECK(ncl::emp_error(y, y) == 0.0);
    CHECK(ncl::emp_error(Eigen::VectorXd(y.array() + 1.0), y) ==
          doctest::Approx(1.0).epsilon(1e-15));
    Eigen::VectorXd preds(3), mu(3);
    preds << 1, 0, 2;
    mu << 0, 0, 0;
    CHECK(ncl::true_error(preds, mu) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS(ncl::emp_error(y, Eigen::VectorXd::Zero(2)));
}
