#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ncl/gram.hpp"

namespace ncl {

// df(lambda) = sum_q rho_q / (M(1-lambda) + lambda*rho_q), with null
// eigenvalues contributing 0 (relevant only at lambda = 1).
double df_spectral(const Eigen::VectorXd& rho, double lambda, int members, double zero_tol = 0.0);

// Trace form trace(G (M(1-lambda) D + lambda G)^+), evaluated by
// materializing the pseudo-inverse through the whitened route. Agrees with
// df_spectral to roundoff; kept as an independent arithmetic path.
double df_analytic(const WhitenedGram& wg, const GramBundle& g, double lambda);

// d(df)/d(lambda) = sum_q rho_q (M - rho_q) / (M(1-lambda) + lambda*rho_q)^2, >= 0.
double df_derivative(const Eigen::VectorXd& rho, double lambda, int members,
                     double zero_tol = 0.0);

// d^2(df)/d(lambda)^2 = 2 sum_q rho_q (M - rho_q)^2 / (...)^3, >= 0.
double df_second_derivative(const Eigen::VectorXd& rho, double lambda, int members,
                            double zero_tol = 0.0);

// Ye-style estimate: sum of squared residuals of the lambda=0 fit over (N - H).
double noise_variance(const Eigen::VectorXd& residuals_at_zero, Eigen::Index n, Eigen::Index h);

// SURE(emp_err, df) = emp_err + sigma^2 (2 df / N - 1).
double sure(double emp_err, double df, double sigma_tilde_sq, Eigen::Index n);

struct DfCurve {
    std::vector<double> lambdas;
    std::vector<double> df;
    std::vector<double> emp_err;
    std::vector<double> sure;  // empty unless a noise variance was supplied
};

DfCurve df_curve(const WhitenedGram& wg, const GramBundle& g, const Eigen::MatrixXd& phi,
                 const Eigen::VectorXd& y, const std::vector<double>& grid,
                 std::optional<double> sigma_tilde_sq = std::nullopt);

// 101 uniform points plus the near-one refinement {1 - 10^-l : l = 2..12}.
std::vector<double> default_lambda_grid();

} // namespace ncl
