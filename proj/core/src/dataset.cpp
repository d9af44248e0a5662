#include "ncl/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ncl/random.hpp"

namespace ncl {

RawDataset RawDataset::take(const std::vector<Eigen::Index>& rows) const {
    RawDataset out;
    out.feature_names = feature_names;
    out.target_names = target_names;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
    out.targets.resize(static_cast<Eigen::Index>(rows.size()), targets.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) = features.row(rows[i]);
        out.targets.row(static_cast<Eigen::Index>(i)) = targets.row(rows[i]);
    }
    return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool parse_cell(const std::string& raw, double& out) {
    std::size_t pos = 0;
    try {
        out = std::stod(raw, &pos);
    } catch (const std::exception&) {
        return false;
    }
    // allow trailing whitespace only
    while (pos < raw.size() && std::isspace(static_cast<unsigned char>(raw[pos]))) ++pos;
    return pos == raw.size() && std::isfinite(out);
}

} // namespace

RawDataset load_csv(const std::string& path, const ColumnSelector& target_columns,
                    const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::string header_line;
    if (!std::getline(in, header_line)) throw std::runtime_error("empty file: " + path);
    if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
    const std::vector<std::string> header = split_line(header_line);
    const int ncols = static_cast<int>(header.size());

    std::vector<int> target_idx;
    if (const auto* names = std::get_if<std::vector<std::string>>(&target_columns)) {
        for (const auto& name : names->empty() ? std::vector<std::string>{} : *names) {
            auto it = std::find(header.begin(), header.end(), name);
            if (it == header.end())
                throw std::runtime_error("target column not found: " + name);
            target_idx.push_back(static_cast<int>(it - header.begin()));
        }
    } else {
        target_idx = std::get<std::vector<int>>(target_columns);
        for (int idx : target_idx)
            if (idx < 0 || idx >= ncols)
                throw std::runtime_error("target column index out of range: " + std::to_string(idx));
    }
    if (target_idx.empty()) throw std::runtime_error("empty target selection");
    if (std::set<int>(target_idx.begin(), target_idx.end()).size() != target_idx.size())
        throw std::runtime_error("duplicate target selection");

    std::vector<int> feature_idx;
    for (int c = 0; c < ncols; ++c)
        if (std::find(target_idx.begin(), target_idx.end(), c) == target_idx.end())
            feature_idx.push_back(c);

    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (static_cast<int>(cells.size()) != ncols)
            throw std::runtime_error("row " + std::to_string(lineno) + ": expected " +
                                     std::to_string(ncols) + " cells, got " +
                                     std::to_string(cells.size()));
        std::vector<double> row(static_cast<std::size_t>(ncols));
        bool ok = true;
        for (int c = 0; c < ncols && ok; ++c)
            ok = parse_cell(cells[static_cast<std::size_t>(c)], row[static_cast<std::size_t>(c)]);
        if (!ok) {
            if (options.drop_bad_rows) continue;
            throw std::runtime_error("row " + std::to_string(lineno) +
                                     ": non-numeric or non-finite cell");
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw std::runtime_error("need at least 2 usable rows, got " +
                                                  std::to_string(rows.size()));

    RawDataset ds;
    const auto n = static_cast<Eigen::Index>(rows.size());
    ds.features.resize(n, static_cast<Eigen::Index>(feature_idx.size()));
    ds.targets.resize(n, static_cast<Eigen::Index>(target_idx.size()));
    for (Eigen::Index r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < feature_idx.size(); ++c)
            ds.features(r, static_cast<Eigen::Index>(c)) =
                rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(feature_idx[c])];
        for (std::size_t c = 0; c < target_idx.size(); ++c)
            ds.targets(r, static_cast<Eigen::Index>(c)) =
                rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(target_idx[c])];
    }
    for (int c : feature_idx) ds.feature_names.push_back(header[static_cast<std::size_t>(c)]);
    for (int c : target_idx) ds.target_names.push_back(header[static_cast<std::size_t>(c)]);
    if (ds.dims() < 1) throw std::runtime_error("no feature columns left after target selection");
    return ds;
}

namespace {

// population std (divide by N)
void column_stats(const Eigen::MatrixXd& m, Eigen::VectorXd& means, Eigen::VectorXd& stds,
                  const std::vector<std::string>& names, const char* kind) {
    const auto n = static_cast<double>(m.rows());
    means = m.colwise().mean();
    stds.resize(m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double var = (m.col(c).array() - means(c)).square().sum() / n;
        stds(c) = std::sqrt(var);
        if (stds(c) <= 0.0) {
            const std::string name = c < static_cast<Eigen::Index>(names.size())
                                         ? names[static_cast<std::size_t>(c)]
                                         : std::to_string(c);
            throw std::runtime_error(std::string("constant column: ") + kind + " '" + name + "'");
        }
    }
}

} // namespace

std::pair<RawDataset, StandardizationParams> standardize(const RawDataset& raw) {
    StandardizationParams p;
    column_stats(raw.features, p.feature_means, p.feature_stds, raw.feature_names, "feature");
    column_stats(raw.targets, p.target_means, p.target_stds, raw.target_names, "target");
    return {apply_standardization(raw, p), p};
}

RawDataset apply_standardization(const RawDataset& raw, const StandardizationParams& p) {
    RawDataset out = raw;
    out.features = (raw.features.rowwise() - p.feature_means.transpose()).array().rowwise() /
                   p.feature_stds.transpose().array();
    out.targets = (raw.targets.rowwise() - p.target_means.transpose()).array().rowwise() /
                  p.target_stds.transpose().array();
    return out;
}

RawDataset invert_standardization(const RawDataset& standardized, const StandardizationParams& p) {
    RawDataset out = standardized;
    out.features = (standardized.features.array().rowwise() * p.feature_stds.transpose().array())
                       .rowwise() +
                   p.feature_means.transpose().array();
    out.targets = (standardized.targets.array().rowwise() * p.target_stds.transpose().array())
                      .rowwise() +
                  p.target_means.transpose().array();
    return out;
}

namespace {

std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, std::uint64_t seed) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    auto rng = make_rng(seed, /*stream=*/0xda7a);
    std::shuffle(idx.begin(), idx.end(), rng);
    return idx;
}

} // namespace

std::pair<RawDataset, RawDataset> split(const RawDataset& ds, double test_fraction,
                                        std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("test_fraction must lie in (0,1)");
    const Eigen::Index n = ds.n();
    auto n_test = static_cast<Eigen::Index>(std::llround(test_fraction * static_cast<double>(n)));
    n_test = std::clamp<Eigen::Index>(n_test, 1, n - 2);
    const auto idx = shuffled_indices(n, seed);
    std::vector<Eigen::Index> test_rows(idx.begin(), idx.begin() + n_test);
    std::vector<Eigen::Index> train_rows(idx.begin() + n_test, idx.end());
    return {ds.take(train_rows), ds.take(test_rows)};
}

std::vector<std::pair<RawDataset, RawDataset>> kfold(const RawDataset& ds, int k,
                                                     std::uint64_t seed) {
    const Eigen::Index n = ds.n();
    if (k < 2 || static_cast<Eigen::Index>(k) > n)
        throw std::invalid_argument("k must lie in [2, N]");
    const auto idx = shuffled_indices(n, seed);

    std::vector<std::pair<RawDataset, RawDataset>> folds;
    folds.reserve(static_cast<std::size_t>(k));
    const Eigen::Index base = n / k, extra = n % k;
    Eigen::Index start = 0;
    for (int f = 0; f < k; ++f) {
        const Eigen::Index len = base + (f < extra ? 1 : 0);
        std::vector<Eigen::Index> val_rows(idx.begin() + start, idx.begin() + start + len);
        std::vector<Eigen::Index> train_rows;
        train_rows.reserve(static_cast<std::size_t>(n - len));
        train_rows.insert(train_rows.end(), idx.begin(), idx.begin() + start);
        train_rows.insert(train_rows.end(), idx.begin() + start + len, idx.end());
        folds.emplace_back(ds.take(train_rows), ds.take(val_rows));
        start += len;
    }
    return folds;
}

std::optional<std::function<double(const Eigen::VectorXd&)>> ground_truth(const std::string& id) {
    if (id == "sine-mix") {
        return [](const Eigen::VectorXd& x) {
            double v = 0.5 * std::cos(7.0 * x(0));
            for (Eigen::Index j = 0; j < x.size(); ++j) v += std::sin(3.0 * x(j));
            return v;
        };
    }
    if (id == "linear") {
        return [](const Eigen::VectorXd& x) { return x.sum(); };
    }
    return std::nullopt;
}

SynthDataset synthesize(const SynthSpec& spec) {
    if (spec.n < 2 || spec.dims < 1) throw std::invalid_argument("need n >= 2 and dims >= 1");
    if (spec.sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
    const auto mu = ground_truth(spec.mu);
    if (!mu) throw std::invalid_argument("unknown ground-truth function: " + spec.mu);

    auto rng_x = make_rng(spec.seed, /*stream=*/1);
    auto rng_eps = make_rng(spec.seed, /*stream=*/2);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SynthDataset out;
    out.sigma = spec.sigma;
    out.dataset.features.resize(spec.n, spec.dims);
    out.dataset.targets.resize(spec.n, 1);
    out.mu_values.resize(spec.n);
    for (Eigen::Index i = 0; i < spec.n; ++i)
        for (Eigen::Index j = 0; j < spec.dims; ++j) out.dataset.features(i, j) = unif(rng_x);
    for (Eigen::Index i = 0; i < spec.n; ++i) {
        out.mu_values(i) = (*mu)(out.dataset.features.row(i).transpose());
        const double noise = spec.sigma > 0.0 ? spec.sigma * gauss(rng_eps) : 0.0;
        out.dataset.targets(i, 0) = out.mu_values(i) + noise;
    }
    for (Eigen::Index j = 0; j < spec.dims; ++j)
        out.dataset.feature_names.push_back("x" + std::to_string(j));
    out.dataset.target_names.push_back("y");
    return out;
}

} // namespace ncl
