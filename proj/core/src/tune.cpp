#include "ncl/tune.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ncl/dof.hpp"
#include "ncl/ensemble.hpp"
#include "ncl/gram.hpp"

namespace ncl {

BrentResult brent_minimize(const std::function<double(double)>& f, double a, double b,
                           double xtol, int max_iter) {
    if (!(a < b)) throw std::invalid_argument("need a < b");
    static const double golden = 0.5 * (3.0 - std::sqrt(5.0));

    BrentResult res;
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = f(x);
    res.evaluations = 1;
    double fw = fx, fv = fx;
    double delta = 0.0, delta_prev = 0.0;

    for (int iter = 0; iter < max_iter; ++iter) {
        const double mid = 0.5 * (a + b);
        const double tol1 = xtol * std::abs(x) + 1e-12;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) {
            res.x = x;
            res.fx = fx;
            return res;
        }

        double d = 0.0;
        bool parabolic_ok = false;
        if (std::abs(delta_prev) > tol1) {
            // trial parabola through x, w, v
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double delta_prev2 = delta_prev;
            delta_prev = delta;
            if (std::abs(p) < std::abs(0.5 * q * delta_prev2) && p > q * (a - x) &&
                p < q * (b - x)) {
                delta = p / q;
                d = x + delta;
                if (d - a < tol2 || b - d < tol2) delta = (x < mid) ? tol1 : -tol1;
                parabolic_ok = true;
            }
        }
        if (!parabolic_ok) {
            delta_prev = (x < mid) ? b - x : a - x;
            delta = golden * delta_prev;
        }
        const double step = (std::abs(delta) >= tol1) ? delta : (delta > 0.0 ? tol1 : -tol1);
        const double u = x + step;
        const double fu = f(u);
        ++res.evaluations;

        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    res.x = x;
    res.fx = fx;
    res.converged = false;
    return res;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

TuneResult run_brent(const std::function<double(double)>& criterion, TuneMethod method,
                     const TuneConfig& config) {
    const auto t0 = Clock::now();
    TuneResult result;
    result.method = method;
    auto traced = [&](double lambda) {
        const double value = criterion(lambda);
        result.trace.emplace_back(lambda, value);
        return value;
    };
    // seed the trace with the endpoints so boundary optima are never missed
    const double f0 = traced(0.0);
    const double f1 = traced(1.0);
    const BrentResult br = brent_minimize(traced, 0.0, 1.0, config.xtol, config.max_iter);
    result.lambda_star = br.x;
    result.criterion_value = br.fx;
    if (f0 <= br.fx) { result.lambda_star = 0.0; result.criterion_value = f0; }
    if (f1 <= result.criterion_value) { result.lambda_star = 1.0; result.criterion_value = f1; }
    result.evaluations = static_cast<int>(result.trace.size());
    result.wall_time = seconds_since(t0);
    return result;
}

} // namespace

TuneResult tune_sure(const RawDataset& train, const RffEnsemble& basis,
                     const TuneConfig& config) {
    const auto t0 = Clock::now();
    const Eigen::Index n = train.n();
    const Eigen::Index h = basis.features_per_member();
    if (n <= h) throw std::invalid_argument("noise variance needs N > H");

    const Eigen::MatrixXd phi = evaluate(basis, train.features);
    const GramBundle g = compute_gram(phi, train.targets.col(0), basis.members());
    const WhitenedGram wg = whiten(g);

    const Eigen::Index outputs = train.outputs();
    std::vector<Eigen::VectorXd> phi_y(static_cast<std::size_t>(outputs));
    std::vector<double> sigma_sq(static_cast<std::size_t>(outputs));
    phi_y[0] = g.phi_y;
    for (Eigen::Index t = 1; t < outputs; ++t)
        phi_y[static_cast<std::size_t>(t)] = target_moment(phi, train.targets.col(t));
    for (Eigen::Index t = 0; t < outputs; ++t) {
        const FittedEnsemble f0 = fit(wg, phi_y[static_cast<std::size_t>(t)], 0.0);
        const Eigen::VectorXd residuals = predict_stacked(f0, phi) - train.targets.col(t);
        sigma_sq[static_cast<std::size_t>(t)] = noise_variance(residuals, n, h);
    }

    auto criterion = [&](double lambda) {
        const double df = df_spectral(wg.eigenvalues, lambda, wg.members, wg.zero_tol);
        double total = 0.0;
        for (Eigen::Index t = 0; t < outputs; ++t) {
            const FittedEnsemble fe = fit(wg, phi_y[static_cast<std::size_t>(t)], lambda);
            const double err = emp_error(predict_stacked(fe, phi), train.targets.col(t));
            total += sure(err, df, sigma_sq[static_cast<std::size_t>(t)], n);
        }
        return total / static_cast<double>(outputs);
    };
    TuneResult result = run_brent(criterion, TuneMethod::sure, config);
    result.wall_time = seconds_since(t0);
    return result;
}

TuneResult tune_cv(const RawDataset& train, const RffEnsemble& basis, int k, std::uint64_t seed,
                   const TuneConfig& config) {
    const auto t0 = Clock::now();
    if (k < 2) throw std::invalid_argument("k must be >= 2");

    struct FoldState {
        WhitenedGram wg;
        std::vector<Eigen::VectorXd> phi_y;  // per output
        Eigen::MatrixXd phi_val;
        Eigen::MatrixXd val_targets;
    };
    std::vector<FoldState> folds;
    for (const auto& [fold_train, fold_val] : kfold(train, k, seed)) {
        if (fold_train.n() <= basis.features_per_member())
            throw std::invalid_argument("fold too small for the basis width");
        FoldState fs;
        const Eigen::MatrixXd phi_train = evaluate(basis, fold_train.features);
        const GramBundle g = compute_gram(phi_train, fold_train.targets.col(0), basis.members());
        fs.wg = whiten(g);
        fs.phi_y.push_back(g.phi_y);
        for (Eigen::Index t = 1; t < train.outputs(); ++t)
            fs.phi_y.push_back(target_moment(phi_train, fold_train.targets.col(t)));
        fs.phi_val = evaluate(basis, fold_val.features);
        fs.val_targets = fold_val.targets;
        folds.push_back(std::move(fs));
    }

    auto criterion = [&](double lambda) {
        double total = 0.0;
        int count = 0;
        for (const FoldState& fs : folds) {
            for (std::size_t t = 0; t < fs.phi_y.size(); ++t) {
                const FittedEnsemble fe = fit(fs.wg, fs.phi_y[t], lambda);
                total += emp_error(predict_stacked(fe, fs.phi_val),
                                   fs.val_targets.col(static_cast<Eigen::Index>(t)));
                ++count;
            }
        }
        return total / static_cast<double>(count);
    };
    TuneResult result = run_brent(criterion, TuneMethod::cv, config);
    result.wall_time = seconds_since(t0);
    return result;
}

namespace {

// Refit on the full training part at lambda and score the held-out part,
// averaging over output columns.
double refit_and_score(const RawDataset& train, const RawDataset& test, const RffEnsemble& basis,
                       double lambda) {
    const Eigen::MatrixXd phi_train = evaluate(basis, train.features);
    const Eigen::MatrixXd phi_test = evaluate(basis, test.features);
    const GramBundle g = compute_gram(phi_train, train.targets.col(0), basis.members());
    const WhitenedGram wg = whiten(g);
    double total = 0.0;
    for (Eigen::Index t = 0; t < train.outputs(); ++t) {
        const Eigen::VectorXd phi_y =
            t == 0 ? g.phi_y : target_moment(phi_train, train.targets.col(t));
        const FittedEnsemble fe = fit(wg, phi_y, lambda);
        total += emp_error(predict_stacked(fe, phi_test), test.targets.col(t));
    }
    return total / static_cast<double>(train.outputs());
}

void mean_std(const std::vector<double>& v, double& mean, double& std_out) {
    mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    std_out = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
}

} // namespace

BenchRow benchmark_dataset(const std::string& id, const RawDataset& dataset,
                           const BenchProtocol& protocol) {
    BenchRow row;
    row.dataset_id = id;
    std::vector<double> errs_cv, errs_sure, lambdas_cv, lambdas_sure;

    int fold_index = 0;
    for (const auto& [train_raw, test_raw] : kfold(dataset, protocol.outer_folds, protocol.seed)) {
        const auto [train, params] = standardize(train_raw);
        const RawDataset test = apply_standardization(test_raw, params);
        const std::uint64_t fold_seed =
            protocol.seed + 1000003ULL * static_cast<std::uint64_t>(++fold_index);
        const double gamma = frequency_heuristic(train.features, fold_seed);
        const RffEnsemble basis = sample_rff(train.dims(), protocol.features_per_member,
                                             protocol.members, gamma, fold_seed);

        const TuneResult sure_res = tune_sure(train, basis, protocol.tune);
        row.time_sure += sure_res.wall_time;
        lambdas_sure.push_back(sure_res.lambda_star);
        errs_sure.push_back(refit_and_score(train, test, basis, sure_res.lambda_star));

        const TuneResult cv_res =
            tune_cv(train, basis, protocol.inner_folds, fold_seed, protocol.tune);
        row.time_cv += cv_res.wall_time;
        lambdas_cv.push_back(cv_res.lambda_star);
        errs_cv.push_back(refit_and_score(train, test, basis, cv_res.lambda_star));
    }

    mean_std(errs_cv, row.test_err_cv_mean, row.test_err_cv_std);
    mean_std(errs_sure, row.test_err_sure_mean, row.test_err_sure_std);
    double unused;
    mean_std(lambdas_cv, row.lambda_cv, unused);
    mean_std(lambdas_sure, row.lambda_sure, unused);
    return row;
}

std::vector<BenchRow> benchmark(const std::vector<std::pair<std::string, RawDataset>>& datasets,
                                const BenchProtocol& protocol) {
    std::vector<BenchRow> rows;
    rows.reserve(datasets.size());
    for (const auto& [id, ds] : datasets) rows.push_back(benchmark_dataset(id, ds, protocol));
    return rows;
}

} // namespace ncl
