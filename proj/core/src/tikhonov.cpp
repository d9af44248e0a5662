#include "ncl/tikhonov.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ncl/ensemble.hpp"
#include "ncl/random.hpp"

namespace ncl {

Eigen::MatrixXd whitened_features(const WhitenedGram& wg, const Eigen::MatrixXd& phi) {
    return wg.apply_whitener(phi);
}

double gamma_for_lambda(double lambda, int members) {
    if (!(lambda > 0.0) || lambda > 1.0)
        throw std::invalid_argument("lambda must lie in (0,1]; gamma diverges at lambda = 0");
    const double m = static_cast<double>(members);
    return (1.0 - lambda) / (m * lambda);
}

RidgeFit fit_ridge(const Eigen::MatrixXd& psi, const Eigen::VectorXd& y, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (psi.cols() != y.size()) throw std::invalid_argument("psi/y sample count mismatch");
    const auto n = static_cast<double>(psi.cols());

    Eigen::MatrixXd k = (psi * psi.transpose()) / n;
    k = 0.5 * (k + k.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
    // same sqrt-eps rank cutoff as the whitened-gram solve, so the two routes
    // drop identical directions when gamma vanishes
    const double tol = static_cast<double>(k.rows()) *
                       std::sqrt(std::numeric_limits<double>::epsilon()) *
                       std::max(es.eigenvalues().maxCoeff(), 0.0);

    const Eigen::VectorXd rhs = es.eigenvectors().transpose() * (psi * y / n);
    Eigen::VectorXd scaled(rhs.size());
    for (Eigen::Index i = 0; i < rhs.size(); ++i) {
        const double denom = gamma + std::max(es.eigenvalues()(i), 0.0);
        scaled(i) = denom > tol ? rhs(i) / denom : 0.0;
    }

    RidgeFit fit;
    fit.gamma = gamma;
    fit.weights = es.eigenvectors() * scaled;
    return fit;
}

Eigen::VectorXd ridge_predict(const RidgeFit& fit, const Eigen::MatrixXd& psi) {
    if (psi.rows() != fit.weights.size()) throw std::invalid_argument("feature size mismatch");
    return psi.transpose() * fit.weights;
}

std::vector<double> equivalence_check(const Eigen::MatrixXd& X_train, const Eigen::VectorXd& y,
                                      const RffEnsemble& basis,
                                      const std::vector<double>& lambda_grid,
                                      std::uint64_t probe_seed, int probe_points) {
    const Eigen::MatrixXd phi_train = evaluate(basis, X_train);
    const GramBundle g = compute_gram(phi_train, y, basis.members());
    const WhitenedGram wg = whiten(g);
    const double inv_m = 1.0 / static_cast<double>(basis.members());

    // fresh probe points so the identity is checked as a function identity
    auto rng = make_rng(probe_seed, /*stream=*/0x71c);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Eigen::MatrixXd X_probe(probe_points, X_train.cols());
    for (Eigen::Index i = 0; i < X_probe.rows(); ++i)
        for (Eigen::Index j = 0; j < X_probe.cols(); ++j) X_probe(i, j) = unif(rng);

    const Eigen::MatrixXd phi_probe = evaluate(basis, X_probe);
    const Eigen::MatrixXd psi_train = inv_m * whitened_features(wg, phi_train);
    const Eigen::MatrixXd psi_probe = inv_m * whitened_features(wg, phi_probe);

    std::vector<double> deviations;
    deviations.reserve(lambda_grid.size());
    for (double lambda : lambda_grid) {
        const FittedEnsemble fe = fit(wg, g, lambda);
        const Eigen::VectorXd ncl_scaled = lambda * predict_stacked(fe, phi_probe);
        const RidgeFit ridge = fit_ridge(psi_train, y, gamma_for_lambda(lambda, basis.members()));
        const Eigen::VectorXd tik = ridge_predict(ridge, psi_probe);
        double worst = 0.0;
        for (Eigen::Index i = 0; i < tik.size(); ++i)
            worst = std::max(worst,
                             std::abs(tik(i) - ncl_scaled(i)) / (1.0 + std::abs(ncl_scaled(i))));
        deviations.push_back(worst);
    }
    return deviations;
}

} // namespace ncl
