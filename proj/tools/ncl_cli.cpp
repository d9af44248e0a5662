// Command-line frontend: CSV in, fitted models / tuning traces / df curves /
// verification tables out. Every run is fully determined by its flags, input
// files, and seed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ncl/dataset.hpp"
#include "ncl/dof.hpp"
#include "ncl/ensemble.hpp"
#include "ncl/gram.hpp"
#include "ncl/model_io.hpp"
#include "ncl/noise_study.hpp"
#include "ncl/rff.hpp"
#include "ncl/tikhonov.hpp"
#include "ncl/tune.hpp"
#include "ncl/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerifyFailure = 3;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("NCL_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

ncl::ColumnSelector parse_targets(const std::vector<std::string>& tokens) {
    bool all_ints = !tokens.empty();
    for (const auto& t : tokens) {
        std::size_t pos = 0;
        try {
            (void)std::stoi(t, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != t.size()) all_ints = false;
    }
    if (all_ints) {
        std::vector<int> idx;
        for (const auto& t : tokens) idx.push_back(std::stoi(t));
        return idx;
    }
    return tokens;
}

struct DataFlags {
    std::string data_path;
    std::vector<std::string> targets;
    int features_per_member = 10;
    int members = 100;
    double gamma = 0.0;
    bool auto_gamma = false;
    bool drop_bad_rows = false;
    std::uint64_t seed = default_seed();

    void attach(CLI::App* cmd, bool require_data = true) {
        auto* d = cmd->add_option("--data", data_path, "input CSV (header row, comma separated)");
        if (require_data) d->required();
        cmd->add_option("--targets", targets, "target columns (names or 0-based indices)")
            ->required(require_data)
            ->delimiter(',');
        cmd->add_option("--H,--features-per-member", features_per_member,
                        "random features per ensemble member")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--M,--members", members, "ensemble members")->check(CLI::PositiveNumber);
        cmd->add_option("--gamma", gamma, "kernel bandwidth")->check(CLI::PositiveNumber);
        cmd->add_flag("--auto-gamma", auto_gamma, "bandwidth from the median-distance heuristic");
        cmd->add_flag("--drop-bad-rows", drop_bad_rows, "drop non-numeric rows instead of failing");
        cmd->add_option("--seed", seed, "random seed (env NCL_SEED overrides the default)");
    }

    ncl::RawDataset load() const {
        return ncl::load_csv(data_path, parse_targets(targets), {.drop_bad_rows = drop_bad_rows});
    }

    double resolve_gamma(const Eigen::MatrixXd& features) const {
        if (gamma > 0.0) return gamma;
        if (!auto_gamma)
            throw CLI::ValidationError("--gamma", "supply --gamma or pass --auto-gamma");
        return ncl::frequency_heuristic(features, seed);
    }
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

json tune_result_json(const ncl::TuneResult& r) {
    json j;
    j["lambda_star"] = r.lambda_star;
    j["criterion_value"] = r.criterion_value;
    j["method"] = r.method == ncl::TuneMethod::sure ? "sure" : "cv";
    j["evaluations"] = r.evaluations;
    j["wall_time_seconds"] = r.wall_time;
    j["trace"] = json::array();
    for (const auto& [lambda, value] : r.trace)
        j["trace"].push_back({{"lambda", lambda}, {"criterion", value}});
    return j;
}

int cmd_fit(const DataFlags& flags, double lambda, const std::string& model_out) {
    const ncl::RawDataset raw = flags.load();
    const auto [train, params] = ncl::standardize(raw);
    const double gamma = flags.resolve_gamma(train.features);
    const ncl::RffEnsemble basis = ncl::sample_rff(train.dims(), flags.features_per_member,
                                                   flags.members, gamma, flags.seed);

    const Eigen::MatrixXd phi = ncl::evaluate(basis, train.features);
    const ncl::GramBundle g = ncl::compute_gram(phi, train.targets.col(0), flags.members);
    const ncl::WhitenedGram wg = ncl::whiten(g);

    ncl::Model model;
    model.basis = basis;
    model.standardization = params;
    model.target_names = train.target_names;
    double total_err = 0.0;
    for (Eigen::Index t = 0; t < train.outputs(); ++t) {
        const Eigen::VectorXd phi_y =
            t == 0 ? g.phi_y : ncl::target_moment(phi, train.targets.col(t));
        ncl::FittedEnsemble fe = ncl::fit(wg, phi_y, lambda);
        fe.basis_ref = "seed:" + std::to_string(flags.seed);
        total_err += ncl::emp_error(ncl::predict_stacked(fe, phi), train.targets.col(t));
        model.fits.push_back(std::move(fe));
    }
    ncl::save_json(ncl::to_json(model), model_out);
    std::cout << "train_emp_err " << total_err / static_cast<double>(train.outputs()) << "\n";
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path) {
    const ncl::Model model = ncl::model_from_json(ncl::load_json(model_path));

    // every column is a feature at prediction time
    ncl::RawDataset ds;
    {
        std::ifstream in(data_path);
        if (!in) throw std::runtime_error("cannot open file: " + data_path);
        std::string line;
        std::getline(in, line);  // header
        std::vector<std::vector<double>> rows;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            std::vector<double> row;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
            rows.push_back(std::move(row));
        }
        if (rows.empty()) throw std::runtime_error("no data rows in " + data_path);
        ds.features.resize(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(rows.front().size()));
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < rows[r].size(); ++c)
                ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    rows[r][c];
    }
    if (ds.features.cols() != model.standardization.feature_means.size())
        throw std::runtime_error("feature count does not match the model");

    const Eigen::MatrixXd std_features =
        (ds.features.rowwise() - model.standardization.feature_means.transpose())
            .array()
            .rowwise() /
        model.standardization.feature_stds.transpose().array();

    std::ostringstream out;
    for (std::size_t t = 0; t < model.fits.size(); ++t)
        out << (t ? "," : "") << model.target_names[t];
    out << "\n";
    std::vector<Eigen::VectorXd> preds;
    for (std::size_t t = 0; t < model.fits.size(); ++t) {
        const ncl::Predictions p = ncl::predict(model.fits[t], model.basis, std_features);
        preds.push_back(p.ensemble * model.standardization.target_stds(static_cast<Eigen::Index>(t)) +
                        Eigen::VectorXd::Constant(
                            p.ensemble.size(),
                            model.standardization.target_means(static_cast<Eigen::Index>(t))));
    }
    for (Eigen::Index i = 0; i < preds.front().size(); ++i) {
        for (std::size_t t = 0; t < preds.size(); ++t) out << (t ? "," : "") << preds[t](i);
        out << "\n";
    }
    write_text(out_path, out.str());
    return 0;
}

int cmd_tune(const DataFlags& flags, const std::string& method, const std::string& out_path) {
    const ncl::RawDataset raw = flags.load();
    const auto [train, params] = ncl::standardize(raw);
    const double gamma = flags.resolve_gamma(train.features);
    const ncl::RffEnsemble basis = ncl::sample_rff(train.dims(), flags.features_per_member,
                                                   flags.members, gamma, flags.seed);
    ncl::TuneResult result;
    if (method == "sure")
        result = ncl::tune_sure(train, basis);
    else
        result = ncl::tune_cv(train, basis, 5, flags.seed);
    write_text(out_path, tune_result_json(result).dump(2) + "\n");
    return 0;
}

int cmd_df_curve(const DataFlags& flags, const std::string& grid_spec,
                 const std::string& out_path) {
    const ncl::RawDataset raw = flags.load();
    const auto [train, params] = ncl::standardize(raw);
    const double gamma = flags.resolve_gamma(train.features);
    const ncl::RffEnsemble basis = ncl::sample_rff(train.dims(), flags.features_per_member,
                                                   flags.members, gamma, flags.seed);

    std::vector<double> grid;
    if (grid_spec == "default") {
        grid = ncl::default_lambda_grid();
    } else if (grid_spec.rfind("uniform:", 0) == 0) {
        const int points = std::stoi(grid_spec.substr(8));
        if (points < 2) throw std::runtime_error("grid needs at least 2 points");
        for (int i = 0; i < points; ++i) grid.push_back(static_cast<double>(i) / (points - 1));
    } else {
        throw std::runtime_error("unknown grid spec: " + grid_spec);
    }

    const Eigen::MatrixXd phi = ncl::evaluate(basis, train.features);
    const ncl::GramBundle g = ncl::compute_gram(phi, train.targets.col(0), flags.members);
    const ncl::WhitenedGram wg = ncl::whiten(g);

    std::optional<double> sigma_sq;
    if (train.n() > basis.features_per_member()) {
        const ncl::FittedEnsemble f0 = ncl::fit(wg, g, 0.0);
        const Eigen::VectorXd residuals =
            ncl::predict_stacked(f0, phi) - train.targets.col(0);
        sigma_sq = ncl::noise_variance(residuals, train.n(), basis.features_per_member());
    }
    const ncl::DfCurve curve =
        ncl::df_curve(wg, g, phi, train.targets.col(0), grid, sigma_sq);

    std::ostringstream out;
    out << "lambda,df,emp_err,sure\n";
    out.precision(12);
    for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
        out << curve.lambdas[i] << "," << curve.df[i] << "," << curve.emp_err[i] << ",";
        if (!curve.sure.empty()) out << curve.sure[i];
        out << "\n";
    }
    write_text(out_path, out.str());
    return 0;
}

int cmd_verify(const std::vector<std::string>& only, std::uint64_t seed) {
    const auto results = ncl::run_verify(seed, only);
    bool all_passed = true;
    for (const auto& suite : results) {
        std::cout << (suite.passed() ? "PASS " : "FAIL ") << suite.name << "  ("
                  << suite.seconds << " s)\n";
        for (const auto& c : suite.checks) {
            std::cout << "  " << (c.passed ? "pass" : "FAIL") << "  " << c.name;
            if (!c.detail.empty()) std::cout << "  [" << c.detail << "]";
            std::cout << "\n";
        }
        all_passed = all_passed && suite.passed();
    }
    return all_passed ? 0 : kExitVerifyFailure;
}

int cmd_bench(const std::vector<std::string>& data_specs,
              const std::vector<std::string>& targets, const ncl::BenchProtocol& protocol,
              const std::string& format, const std::string& out_path) {
    std::vector<std::pair<std::string, ncl::RawDataset>> datasets;
    for (const auto& spec : data_specs) {
        try {
            datasets.emplace_back(spec, ncl::load_csv(spec, parse_targets(targets), {}));
        } catch (const std::exception& e) {
            std::cerr << "skipping " << spec << ": " << e.what() << "\n";
        }
    }
    if (datasets.empty()) throw std::runtime_error("no usable datasets");

    std::vector<ncl::BenchRow> rows;
    for (const auto& [id, ds] : datasets) {
        try {
            rows.push_back(ncl::benchmark_dataset(id, ds, protocol));
        } catch (const std::exception& e) {
            std::cerr << "benchmark failed on " << id << ": " << e.what() << "\n";
        }
    }

    std::ostringstream out;
    if (format == "json") {
        json j = json::array();
        for (const auto& r : rows) {
            j.push_back({{"dataset", r.dataset_id},
                         {"test_err_cv_mean", r.test_err_cv_mean},
                         {"test_err_cv_std", r.test_err_cv_std},
                         {"test_err_sure_mean", r.test_err_sure_mean},
                         {"test_err_sure_std", r.test_err_sure_std},
                         {"time_cv_seconds", r.time_cv},
                         {"time_sure_seconds", r.time_sure},
                         {"lambda_cv", r.lambda_cv},
                         {"lambda_sure", r.lambda_sure}});
        }
        out << j.dump(2) << "\n";
    } else {
        out << "dataset,test_err_cv_mean,test_err_cv_std,test_err_sure_mean,test_err_sure_std,"
               "time_cv,time_sure,lambda_cv,lambda_sure\n";
        for (const auto& r : rows)
            out << r.dataset_id << "," << r.test_err_cv_mean << "," << r.test_err_cv_std << ","
                << r.test_err_sure_mean << "," << r.test_err_sure_std << "," << r.time_cv << ","
                << r.time_sure << "," << r.lambda_cv << "," << r.lambda_sure << "\n";
    }
    write_text(out_path, out.str());
    return 0;
}

int cmd_synth(const ncl::SynthSpec& spec, const std::string& out_path) {
    const ncl::SynthDataset synth = ncl::synthesize(spec);
    std::ostringstream out;
    out.precision(17);
    for (const auto& name : synth.dataset.feature_names) out << name << ",";
    out << "y\n";
    for (Eigen::Index i = 0; i < synth.dataset.n(); ++i) {
        for (Eigen::Index j = 0; j < synth.dataset.dims(); ++j)
            out << synth.dataset.features(i, j) << ",";
        out << synth.dataset.targets(i, 0) << "\n";
    }
    write_text(out_path, out.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diversity-regularized ensemble regression over random Fourier features"};
    app.require_subcommand(1);

    DataFlags fit_flags, tune_flags, curve_flags;
    double lambda = 0.5;
    std::string model_out = "model.json", out_path = "-", format = "csv";

    auto* fit = app.add_subcommand("fit", "fit an ensemble at a fixed diversity level");
    fit_flags.attach(fit);
    fit->add_option("--lambda", lambda, "diversity parameter")->check(CLI::Range(0.0, 1.0));
    fit->add_option("--model-out", model_out, "model file to write");

    std::string predict_model, predict_data, predict_out = "-";
    auto* predict = app.add_subcommand("predict", "predict with a saved model");
    predict->add_option("--model", predict_model, "model file")->required();
    predict->add_option("--data", predict_data, "feature CSV (header row)")->required();
    predict->add_option("--output", predict_out, "output path, - for stdout");

    std::string method = "sure", tune_out = "-";
    auto* tune = app.add_subcommand("tune", "select the diversity parameter");
    tune_flags.attach(tune);
    tune->add_option("--method", method, "sure or cv5")
        ->check(CLI::IsMember({"sure", "cv5"}));
    tune->add_option("--output", tune_out, "output path, - for stdout");

    std::string grid_spec = "default", curve_out = "-";
    auto* curve = app.add_subcommand("df-curve", "degrees of freedom across the diversity range");
    curve_flags.attach(curve);
    curve->add_option("--grid", grid_spec, "default or uniform:<points>");
    curve->add_option("--output", curve_out, "output path, - for stdout");

    std::vector<std::string> only;
    std::uint64_t verify_seed = default_seed();
    auto* verify = app.add_subcommand("verify", "run the mathematical property suites");
    verify->add_option("--only", only, "restrict to the named suites")->delimiter(',');
    verify->add_option("--seed", verify_seed, "random seed");

    std::vector<std::string> bench_data, bench_targets;
    ncl::BenchProtocol protocol;
    protocol.seed = default_seed();
    std::string bench_out = "-";
    auto* bench = app.add_subcommand("bench", "compare both tuning methods across datasets");
    bench->add_option("--data", bench_data, "dataset CSVs")->required()->take_all();
    bench->add_option("--targets", bench_targets, "target columns")->required()->delimiter(',');
    int bench_h = 10, bench_m = 100;
    bench->add_option("--H", bench_h, "features per member");
    bench->add_option("--M", bench_m, "ensemble members");
    bench->add_option("--seed", protocol.seed, "random seed");
    bench->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    bench->add_option("--output", bench_out, "output path, - for stdout");

    ncl::SynthSpec synth_spec;
    synth_spec.seed = default_seed();
    std::string synth_out = "-";
    auto* synth = app.add_subcommand("synth", "generate a synthetic regression CSV");
    long long synth_n = 1000, synth_d = 2;
    synth->add_option("--n", synth_n, "sample count")->check(CLI::PositiveNumber);
    synth->add_option("--d", synth_d, "input dimensions")->check(CLI::PositiveNumber);
    synth->add_option("--sigma", synth_spec.sigma, "noise standard deviation")
        ->check(CLI::NonNegativeNumber);
    synth->add_option("--mu", synth_spec.mu, "ground-truth function id");
    synth->add_option("--seed", synth_spec.seed, "random seed");
    synth->add_option("--output", synth_out, "output path, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (*fit) return cmd_fit(fit_flags, lambda, model_out);
        if (*predict) return cmd_predict(predict_model, predict_data, predict_out);
        if (*tune) return cmd_tune(tune_flags, method == "cv5" ? "cv" : "sure", tune_out);
        if (*curve) return cmd_df_curve(curve_flags, grid_spec, curve_out);
        if (*verify) return cmd_verify(only, verify_seed);
        if (*bench) {
            protocol.features_per_member = bench_h;
            protocol.members = bench_m;
            return cmd_bench(bench_data, bench_targets, protocol, format, bench_out);
        }
        if (*synth) {
            synth_spec.n = synth_n;
            synth_spec.dims = synth_d;
            return cmd_synth(synth_spec, synth_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
