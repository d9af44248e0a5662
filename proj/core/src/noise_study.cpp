#include "ncl/noise_study.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ncl/dof.hpp"
#include "ncl/ensemble.hpp"
#include "ncl/gram.hpp"
#include "ncl/random.hpp"

namespace ncl {

NoiseStudyReport run_noise_study(const SynthSpec& spec, const RffEnsemble& basis,
                                 const std::vector<double>& lambda_grid, int k_draws,
                                 std::uint64_t seed) {
    if (k_draws < 1) throw std::invalid_argument("need at least one noise draw");
    if (lambda_grid.empty()) throw std::invalid_argument("empty lambda grid");

    // design and noiseless targets drawn once; only the noise is redrawn
    SynthSpec noiseless = spec;
    noiseless.sigma = 0.0;
    const SynthDataset base = synthesize(noiseless);
    const Eigen::MatrixXd phi = evaluate(basis, base.dataset.features);
    const GramBundle g = compute_gram(phi, base.mu_values, basis.members());
    const WhitenedGram wg = whiten(g);
    const Eigen::Index n = base.dataset.n();

    NoiseStudyReport report;
    report.sigma = spec.sigma;
    report.draws = k_draws;
    report.lambdas = lambda_grid;

    const auto n_lambda = lambda_grid.size();
    std::vector<double> sum(n_lambda, 0.0), sum_sq(n_lambda, 0.0);
    for (int draw = 0; draw < k_draws; ++draw) {
        auto rng = make_rng(seed, /*stream=*/0x6e01ULL + static_cast<std::uint64_t>(draw));
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::VectorXd y = base.mu_values;
        if (spec.sigma > 0.0)
            for (Eigen::Index i = 0; i < n; ++i) y(i) += spec.sigma * gauss(rng);
        const Eigen::VectorXd phi_y = target_moment(phi, y);
        for (std::size_t l = 0; l < n_lambda; ++l) {
            const FittedEnsemble fe = fit(wg, phi_y, lambda_grid[l]);
            const double err = true_error(predict_stacked(fe, phi), base.mu_values);
            sum[l] += err;
            sum_sq[l] += err * err;
        }
    }

    for (std::size_t l = 0; l < n_lambda; ++l) {
        const double mean = sum[l] / k_draws;
        report.mean_true_err.push_back(mean);
        const double var =
            k_draws > 1 ? std::max(0.0, (sum_sq[l] - k_draws * mean * mean) / (k_draws - 1)) : 0.0;
        report.std_error.push_back(std::sqrt(var / k_draws));
    }
    const auto best =
        std::min_element(report.mean_true_err.begin(), report.mean_true_err.end());
    report.lambda_best = lambda_grid[static_cast<std::size_t>(
        std::distance(report.mean_true_err.begin(), best))];

    double inv_sum = 0.0;
    for (Eigen::Index i = 0; i < wg.eigenvalues.size(); ++i)
        if (wg.eigenvalues(i) > wg.zero_tol) inv_sum += 1.0 / wg.eigenvalues(i);
    report.derivative_at_one =
        2.0 * spec.sigma * spec.sigma / static_cast<double>(n) * inv_sum;
    return report;
}

} // namespace ncl
