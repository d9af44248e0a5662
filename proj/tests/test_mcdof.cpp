#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "ncl/dataset.hpp"
#include "ncl/dof.hpp"
#include "ncl/ensemble.hpp"
#include "ncl/gram.hpp"
#include "ncl/mcdof.hpp"
#include "ncl/random.hpp"
#include "ncl/rff.hpp"

TEST_CASE("identity estimator has sensitivity N") {
    const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(50, -1.0, 1.0);
    const ncl::McDfEstimate est =
        ncl::estimate_df([](const Eigen::VectorXd& t) { return t; }, y, 1.0, 200, 3);
    CHECK(est.repeats == 200);
    CHECK(est.per_repeat.size() == 200);
    CHECK(std::abs(est.value - 50.0) <= 3.0 * est.std_error);

    // reported statistics are consistent with the raw repeats
    double mean = 0.0;
    for (double v : est.per_repeat) mean += v;
    mean /= 200.0;
    CHECK(est.value == doctest::Approx(mean).epsilon(1e-14));
}

TEST_CASE("constant estimator has zero sensitivity") {
    const Eigen::VectorXd y = Eigen::VectorXd::Ones(20);
    const ncl::McDfEstimate est = ncl::estimate_df(
        [](const Eigen::VectorXd& t) { return Eigen::VectorXd::Constant(t.size(), 4.2); }, y,
        1e-3, 50, 5);
    CHECK(est.value == 0.0);
    for (double v : est.per_repeat) CHECK(v == 0.0);
    CHECK(est.std_error == 0.0);
}

TEST_CASE("fixed linear smoother recovers its trace at any perturbation size") {
    auto rng = ncl::make_rng(7);
    std::normal_distribution<double> gauss(0.0, 0.4);
    Eigen::MatrixXd s(5, 5);
    for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = gauss(rng);
    const double trace = s.trace();

    Eigen::VectorXd y(5);
    y << 1, -0.5, 2, 0, 0.75;
    const auto oracle = [&s](const Eigen::VectorXd& t) { return Eigen::VectorXd(s * t); };

    const ncl::McDfEstimate base = ncl::estimate_df(oracle, y, 1e-3, 500, 11);
    CHECK(std::abs(base.value - trace) <= 2.0 * base.std_error);

    for (double eps : {1e-1, 1e-3, 1e-6}) {
        const ncl::McDfEstimate est = ncl::estimate_df(oracle, y, eps, 300, 13);
        CHECK(std::abs(est.value - trace) <= 3.0 * est.std_error);
    }
    // same seed, same epsilon: per-repeat values identical (probe streams are
    // independent of epsilon, so the linear case is bitwise epsilon-stable too)
    const ncl::McDfEstimate a = ncl::estimate_df(oracle, y, 1e-3, 50, 17);
    const ncl::McDfEstimate b = ncl::estimate_df(oracle, y, 1e-3, 50, 17);
    CHECK(a.per_repeat == b.per_repeat);
}

TEST_CASE("oracle failures carry the repeat index") {
    const Eigen::VectorXd y = Eigen::VectorXd::Zero(4);
    int calls = 0;
    const auto flaky = [&calls](const Eigen::VectorXd& t) -> Eigen::VectorXd {
        if (++calls > 3) throw std::runtime_error("backend unavailable");
        return t;
    };
    try {
        ncl::estimate_df(flaky, y, 1e-3, 10, 19);
        FAIL("expected a propagated oracle failure");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("repeat 2") != std::string::npos);
    }
    CHECK_THROWS(ncl::estimate_df([](const Eigen::VectorXd& t) { return t; }, y, 0.0, 10, 19));
    CHECK_THROWS(ncl::estimate_df([](const Eigen::VectorXd& t) { return t; }, y, 1e-3, 0, 19));
}

TEST_CASE("agrees with the analytic degrees of freedom for the closed-form fit") {
    ncl::SynthSpec spec;
    spec.n = 100;
    spec.dims = 2;
    spec.sigma = 0.3;
    spec.seed = 23;
    const ncl::SynthDataset synth = ncl::synthesize(spec);
    const ncl::RffEnsemble basis = ncl::sample_rff(2, 3, 4, 0.8, 24);
    const Eigen::MatrixXd phi = ncl::evaluate(basis, synth.dataset.features);
    const ncl::WhitenedGram wg =
        ncl::whiten(ncl::compute_gram(phi, synth.dataset.targets.col(0), 4));

    const double lambda = 0.5;
    const auto oracle = [&](const Eigen::VectorXd& t) {
        return ncl::predict_stacked(ncl::fit(wg, ncl::target_moment(phi, t), lambda), phi);
    };
    const ncl::McDfEstimate est =
        ncl::estimate_df(oracle, synth.dataset.targets.col(0), 1e-3, 200, 25);
    const double analytic = ncl::df_spectral(wg.eigenvalues, lambda, 4, wg.zero_tol);
    CHECK(std::abs(est.value - analytic) <= std::max(0.02 * analytic, 3.0 * est.std_error));
}
