#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace ncl {

// Black-box estimator over a fixed design: maps a target vector to fitted
// values at the N design points. Must be deterministic in its argument.
using EstimatorOracle = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct McDfEstimate {
    double value = 0.0;       // mean of per_repeat
    double epsilon = 0.0;
    int repeats = 0;
    std::vector<double> per_repeat;
    double std_error = 0.0;   // sample std / sqrt(repeats)
};

// Monte-Carlo degrees of freedom: per repeat draw b ~ N(0, I), perturb the
// targets by epsilon*b, and accumulate sum_n b_n (mu(y + eps b)_n - mu(y)_n) / eps.
// The base fit mu(y) is computed once and shared across repeats.
McDfEstimate estimate_df(const EstimatorOracle& oracle, const Eigen::VectorXd& y, double epsilon,
                         int repeats, std::uint64_t seed);

} // namespace ncl
