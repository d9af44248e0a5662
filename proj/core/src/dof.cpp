#include "ncl/dof.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ncl/ensemble.hpp"

namespace ncl {

double df_spectral(const Eigen::VectorXd& rho, double lambda, int members, double zero_tol) {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must lie in [0,1]");
    const double md = static_cast<double>(members) * (1.0 - lambda);
    double df = 0.0;
    for (Eigen::Index i = 0; i < rho.size(); ++i) {
        const double r = rho(i);
        if (lambda == 1.0 && r <= zero_tol) continue;  // dropped null direction
        const double denom = md + lambda * r;
        if (denom > 0.0) df += r / denom;
    }
    return df;
}

double df_analytic(const WhitenedGram& wg, const GramBundle& g, double lambda) {
    // trace(G A^+) = trace((W G W)(V g V^T)); grouping the whitener with the
    // gram keeps the ill-conditioned member scalings out of the product
    (void)g;
    const Eigen::VectorXd shrink = wg.shrinkage(lambda);
    const Eigen::MatrixXd inner =
        wg.eigenvectors * shrink.asDiagonal() * wg.eigenvectors.transpose();
    return wg.p.cwiseProduct(inner).sum();
}

double df_derivative(const Eigen::VectorXd& rho, double lambda, int members, double zero_tol) {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must lie in [0,1]");
    const double m = static_cast<double>(members);
    double out = 0.0;
    for (Eigen::Index i = 0; i < rho.size(); ++i) {
        const double r = rho(i);
        if (lambda == 1.0 && r <= zero_tol) continue;
        const double denom = m * (1.0 - lambda) + lambda * r;
        if (denom > 0.0) out += r * (m - r) / (denom * denom);
    }
    return out;
}

double df_second_derivative(const Eigen::VectorXd& rho, double lambda, int members,
                            double zero_tol) {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must lie in [0,1]");
    const double m = static_cast<double>(members);
    double out = 0.0;
    for (Eigen::Index i = 0; i < rho.size(); ++i) {
        const double r = rho(i);
        if (lambda == 1.0 && r <= zero_tol) continue;
        const double denom = m * (1.0 - lambda) + lambda * r;
        if (denom > 0.0) out += 2.0 * r * (m - r) * (m - r) / (denom * denom * denom);
    }
    return out;
}

double noise_variance(const Eigen::VectorXd& residuals_at_zero, Eigen::Index n, Eigen::Index h) {
    if (n <= h) throw std::invalid_argument("need more samples than features per member");
    if (residuals_at_zero.size() != n) throw std::invalid_argument("residual length mismatch");
    return residuals_at_zero.squaredNorm() / static_cast<double>(n - h);
}

double sure(double emp_err, double df, double sigma_tilde_sq, Eigen::Index n) {
    if (n < 1) throw std::invalid_argument("need n >= 1");
    return emp_err + sigma_tilde_sq * (2.0 * df / static_cast<double>(n) - 1.0);
}

DfCurve df_curve(const WhitenedGram& wg, const GramBundle& g, const Eigen::MatrixXd& phi,
                 const Eigen::VectorXd& y, const std::vector<double>& grid,
                 std::optional<double> sigma_tilde_sq) {
    if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("grid must ascend");
    DfCurve curve;
    curve.lambdas = grid;
    const auto n = static_cast<Eigen::Index>(y.size());
    for (double lambda : grid) {
        curve.df.push_back(df_spectral(wg.eigenvalues, lambda, wg.members, wg.zero_tol));
        const FittedEnsemble fe = fit(wg, g, lambda);
        const double err = emp_error(predict_stacked(fe, phi), y);
        curve.emp_err.push_back(err);
        if (sigma_tilde_sq)
            curve.sure.push_back(sure(err, curve.df.back(), *sigma_tilde_sq, n));
    }
    return curve;
}

std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(static_cast<double>(i) / 100.0);
    for (int l = 2; l <= 12; ++l) grid.push_back(1.0 - std::pow(10.0, -l));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

} // namespace ncl
