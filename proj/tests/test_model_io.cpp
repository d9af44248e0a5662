#include <doctest.h>

#include <cstdio>
#include <string>

#include "ncl/dataset.hpp"
#include "ncl/ensemble.hpp"
#include "ncl/gram.hpp"
#include "ncl/model_io.hpp"
#include "ncl/rff.hpp"

namespace {

struct TempPath {
    std::string path;
    explicit TempPath(const std::string& name) : path("model_io_" + name) {}
    ~TempPath() { std::remove(path.c_str()); }
};

ncl::RffEnsemble sample_basis() { return ncl::sample_rff(3, 4, 2, 0.6, 91); }

}  // namespace

TEST_CASE("basis json round trip is exact") {
    const ncl::RffEnsemble basis = sample_basis();
    const ncl::RffEnsemble back = ncl::basis_from_json(ncl::to_json(basis));
    CHECK(back.members() == basis.members());
    CHECK(back.gamma == basis.gamma);
    CHECK(back.seed == basis.seed);
    for (int m = 0; m < basis.members(); ++m) {
        CHECK(back.frequencies[m] == basis.frequencies[m]);
        CHECK(back.phases[m] == basis.phases[m]);
    }
    // serialized doubles survive bit-for-bit, so feature evaluation matches
    const Eigen::MatrixXd X = Eigen::MatrixXd::Random(5, 3);
    CHECK(ncl::evaluate(back, X) == ncl::evaluate(basis, X));
}

TEST_CASE("standardization json round trip is exact") {
    ncl::StandardizationParams p;
    p.feature_means = Eigen::Vector3d(0.1, -2.5, 1e-17);
    p.feature_stds = Eigen::Vector3d(1.0, 0.25, 3.0);
    p.target_means = Eigen::VectorXd::Constant(1, 0.7);
    p.target_stds = Eigen::VectorXd::Constant(1, 2.0);
    const ncl::StandardizationParams back =
        ncl::standardization_from_json(ncl::to_json(p));
    CHECK(back.feature_means == p.feature_means);
    CHECK(back.feature_stds == p.feature_stds);
    CHECK(back.target_means == p.target_means);
    CHECK(back.target_stds == p.target_stds);
}

TEST_CASE("model save/load preserves predictions") {
    const ncl::RffEnsemble basis = sample_basis();
    const Eigen::MatrixXd X = Eigen::MatrixXd::Random(30, 3);
    const Eigen::VectorXd y = X.col(0).array().sin();
    const Eigen::MatrixXd phi = ncl::evaluate(basis, X);
    const ncl::GramBundle g = ncl::compute_gram(phi, y, basis.members());
    const ncl::WhitenedGram wg = ncl::whiten(g);

    ncl::Model model;
    model.basis = basis;
    model.fits.push_back(ncl::fit(wg, g, 0.4));
    model.target_names = {"y"};
    model.standardization.feature_means = Eigen::VectorXd::Zero(3);
    model.standardization.feature_stds = Eigen::VectorXd::Ones(3);
    model.standardization.target_means = Eigen::VectorXd::Zero(1);
    model.standardization.target_stds = Eigen::VectorXd::Ones(1);

    TempPath tmp("model.json");
    ncl::save_json(ncl::to_json(model), tmp.path);
    const ncl::Model back = ncl::model_from_json(ncl::load_json(tmp.path));

    CHECK(back.target_names == model.target_names);
    REQUIRE(back.fits.size() == 1);
    CHECK(back.fits[0].lambda == model.fits[0].lambda);
    CHECK(back.fits[0].beta == model.fits[0].beta);
    CHECK(back.fits[0].members == model.fits[0].members);
    CHECK(back.fits[0].features_per_member == model.fits[0].features_per_member);

    const Eigen::MatrixXd X_new = Eigen::MatrixXd::Random(7, 3);
    const ncl::Predictions before = ncl::predict(model.fits[0], model.basis, X_new);
    const ncl::Predictions after = ncl::predict(back.fits[0], back.basis, X_new);
    CHECK(before.ensemble == after.ensemble);
    CHECK(before.members == after.members);
}

TEST_CASE("model io error paths") {
    CHECK_THROWS(ncl::load_json("no_such_file_here.json"));

    const ncl::RffEnsemble basis = sample_basis();
    ncl::Model model;
    model.basis = basis;
    ncl::FittedEnsemble fe;
    fe.lambda = 0.5;
    fe.beta = Eigen::VectorXd::Zero(3);  // wrong length: basis has Q = 8
    fe.members = basis.members();
    fe.features_per_member = basis.features_per_member();
    model.fits.push_back(fe);
    model.target_names = {"y"};
    model.standardization.feature_means = Eigen::VectorXd::Zero(3);
    model.standardization.feature_stds = Eigen::VectorXd::Ones(3);
    model.standardization.target_means = Eigen::VectorXd::Zero(1);
    model.standardization.target_stds = Eigen::VectorXd::Ones(1);
    CHECK_THROWS(ncl::model_from_json(ncl::to_json(model)));
}
