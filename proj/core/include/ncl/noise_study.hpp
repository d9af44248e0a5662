#pragma once

#include <cstdint>
#include <vector>

#include "ncl/dataset.hpp"
#include "ncl/rff.hpp"

namespace ncl {

// Fixed-design noise experiment: with the design and basis held fixed, the
// target noise is redrawn many times and the true error of the fitted
// ensemble is averaged per lambda. With noise present the best lambda sits
// strictly below 1; without noise it is 1.
struct NoiseStudyReport {
    double sigma = 0.0;
    int draws = 0;
    std::vector<double> lambdas;
    std::vector<double> mean_true_err;
    std::vector<double> std_error;
    double lambda_best = 0.0;
    // (2 sigma^2 / N) * sum over positive eigenvalues of 1/rho: the slope of
    // the expected true error at lambda = 1, positive whenever sigma > 0.
    double derivative_at_one = 0.0;
};

NoiseStudyReport run_noise_study(const SynthSpec& spec, const RffEnsemble& basis,
                                 const std::vector<double>& lambda_grid, int k_draws,
                                 std::uint64_t seed);

} // namespace ncl
