#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ncl/dataset.hpp"
#include "ncl/rff.hpp"

namespace ncl {

struct BrentResult {
    double x = 0.0;
    double fx = 0.0;
    int evaluations = 0;
    bool converged = true;
};

// Derivative-free scalar minimization on [a,b]: golden-section bracketing
// with successive parabolic interpolation. Never evaluates outside [a,b].
BrentResult brent_minimize(const std::function<double(double)>& f, double a, double b,
                           double xtol = 1e-4, int max_iter = 100);

enum class TuneMethod { sure, cv };

struct TuneResult {
    double lambda_star = 0.0;
    double criterion_value = 0.0;
    TuneMethod method = TuneMethod::sure;
    int evaluations = 0;
    double wall_time = 0.0;  // seconds
    std::vector<std::pair<double, double>> trace;  // (lambda, criterion) in call order
};

struct TuneConfig {
    double xtol = 1e-4;
    int max_iter = 100;
};

// Diversity selection by minimizing SURE over lambda. The gram structures
// and eigendecomposition are built exactly once; every criterion call is a
// cheap spectral re-solve. Multi-output targets contribute the mean
// criterion across columns.
TuneResult tune_sure(const RawDataset& train, const RffEnsemble& basis,
                     const TuneConfig& config = {});

// Baseline: k-fold cross-validation criterion under the same Brent loop.
// The basis is shared across folds; each fold builds its gram once.
TuneResult tune_cv(const RawDataset& train, const RffEnsemble& basis, int k, std::uint64_t seed,
                   const TuneConfig& config = {});

struct BenchRow {
    std::string dataset_id;
    double test_err_cv_mean = 0.0, test_err_cv_std = 0.0;
    double test_err_sure_mean = 0.0, test_err_sure_std = 0.0;
    double time_cv = 0.0, time_sure = 0.0;
    double lambda_cv = 0.0, lambda_sure = 0.0;
};

struct BenchProtocol {
    Eigen::Index features_per_member = 10;
    int members = 100;
    int outer_folds = 5;
    int inner_folds = 5;
    std::uint64_t seed = 0;
    TuneConfig tune;
};

// Outer k-fold evaluation of both tuning methods: per fold, standardize on
// the training part, fit a fresh basis, tune by SURE and by inner CV, refit
// at each lambda*, score the held-out part. Multi-output test errors are
// averaged across outputs.
BenchRow benchmark_dataset(const std::string& id, const RawDataset& dataset,
                           const BenchProtocol& protocol);

std::vector<BenchRow> benchmark(const std::vector<std::pair<std::string, RawDataset>>& datasets,
                                const BenchProtocol& protocol);

} // namespace ncl
