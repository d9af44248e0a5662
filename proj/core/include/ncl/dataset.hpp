#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace ncl {

struct RawDataset {
    Eigen::MatrixXd features;  // N x d
    Eigen::MatrixXd targets;   // N x T
    std::vector<std::string> feature_names;
    std::vector<std::string> target_names;

    Eigen::Index n() const { return features.rows(); }
    Eigen::Index dims() const { return features.cols(); }
    Eigen::Index outputs() const { return targets.cols(); }

    // Row subset, preserving order of `rows`.
    RawDataset take(const std::vector<Eigen::Index>& rows) const;
};

struct StandardizationParams {
    Eigen::VectorXd feature_means;
    Eigen::VectorXd feature_stds;
    Eigen::VectorXd target_means;
    Eigen::VectorXd target_stds;
};

// Target columns may be selected by name or by 0-based index.
using ColumnSelector = std::variant<std::vector<std::string>, std::vector<int>>;

struct CsvOptions {
    // Non-finite / non-numeric cells abort the load by default;
    // set to true to silently drop the offending rows instead.
    bool drop_bad_rows = false;
};

RawDataset load_csv(const std::string& path, const ColumnSelector& target_columns,
                    const CsvOptions& options = {});

// Mean 0, population std 1 (divide by N) per column. Parameters are
// returned so they can be re-applied to held-out data.
std::pair<RawDataset, StandardizationParams> standardize(const RawDataset& raw);

RawDataset apply_standardization(const RawDataset& raw, const StandardizationParams& p);
RawDataset invert_standardization(const RawDataset& standardized, const StandardizationParams& p);

std::pair<RawDataset, RawDataset> split(const RawDataset& ds, double test_fraction,
                                        std::uint64_t seed);

// k (train, validation) pairs; validation sets disjoint and exhaustive.
std::vector<std::pair<RawDataset, RawDataset>> kfold(const RawDataset& ds, int k,
                                                     std::uint64_t seed);

struct SynthSpec {
    Eigen::Index n = 0;
    Eigen::Index dims = 1;
    std::string mu = "sine-mix";
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

struct SynthDataset {
    RawDataset dataset;
    Eigen::VectorXd mu_values;  // noiseless targets, for true-error checks
    double sigma = 0.0;
};

// Named ground-truth function, or nullopt if unknown.
std::optional<std::function<double(const Eigen::VectorXd&)>> ground_truth(const std::string& id);

// x_n i.i.d. uniform on [-1,1]^d, targets = mu(x_n) + Gaussian(0, sigma^2).
SynthDataset synthesize(const SynthSpec& spec);

} // namespace ncl
