#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ncl/gram.hpp"
#include "ncl/rff.hpp"

namespace ncl {

// Per-member whitened features psi_m(x) = <phi_m,phi_m>^{-1/2} phi_m(x),
// stacked Q x N'. No (1/M) aggregation factor; see equivalence_check.
Eigen::MatrixXd whitened_features(const WhitenedGram& wg, const Eigen::MatrixXd& phi);

// Ridge level matching diversity lambda under the aggregated whitened
// features: gamma = (1 - lambda) / (M lambda). Diverges at lambda = 0,
// which is rejected.
double gamma_for_lambda(double lambda, int members);

struct RidgeFit {
    double gamma = 0.0;
    Eigen::VectorXd weights;  // Q
};

// Ridge on arbitrary stacked features: w = (gamma I + (1/N) Psi Psi^T)^+ (1/N) Psi y,
// via symmetric eigendecomposition with the usual null-space convention.
RidgeFit fit_ridge(const Eigen::MatrixXd& psi, const Eigen::VectorXd& y, double gamma);

Eigen::VectorXd ridge_predict(const RidgeFit& fit, const Eigen::MatrixXd& psi);

// Max relative deviation |G_gamma(x) - lambda F_lambda(x)| over a fresh
// uniform probe set, one entry per lambda. The ridge side uses the stacked
// features (1/M) psi, matching the aggregated ensemble reading.
std::vector<double> equivalence_check(const Eigen::MatrixXd& X_train, const Eigen::VectorXd& y,
                                      const RffEnsemble& basis,
                                      const std::vector<double>& lambda_grid,
                                      std::uint64_t probe_seed = 0, int probe_points = 64);

} // namespace ncl
