#include "ncl/model_io.hpp"

#include <fstream>
#include <stdexcept>

namespace ncl {

using nlohmann::json;

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vec_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json mat_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
    }
    return rows;
}

Eigen::MatrixXd mat_from_json(const json& j) {
    const auto rows = j.get<std::vector<std::vector<double>>>();
    if (rows.empty()) return {};
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows.front().size())
            throw std::runtime_error("ragged matrix in json");
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    return m;
}

} // namespace

json to_json(const RffEnsemble& basis) {
    json j;
    j["gamma"] = basis.gamma;
    j["seed"] = basis.seed;
    j["members"] = basis.members();
    j["features_per_member"] = basis.features_per_member();
    j["dims"] = basis.dims();
    j["frequencies"] = json::array();
    j["phases"] = json::array();
    for (const auto& z : basis.frequencies) j["frequencies"].push_back(mat_to_json(z));
    for (const auto& b : basis.phases) j["phases"].push_back(vec_to_json(b));
    return j;
}

RffEnsemble basis_from_json(const json& j) {
    RffEnsemble basis;
    basis.gamma = j.at("gamma").get<double>();
    basis.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& z : j.at("frequencies")) basis.frequencies.push_back(mat_from_json(z));
    for (const auto& b : j.at("phases")) basis.phases.push_back(vec_from_json(b));
    if (basis.frequencies.size() != basis.phases.size())
        throw std::runtime_error("basis json: frequency/phase count mismatch");
    return basis;
}

json to_json(const StandardizationParams& p) {
    json j;
    j["feature_means"] = vec_to_json(p.feature_means);
    j["feature_stds"] = vec_to_json(p.feature_stds);
    j["target_means"] = vec_to_json(p.target_means);
    j["target_stds"] = vec_to_json(p.target_stds);
    return j;
}

StandardizationParams standardization_from_json(const json& j) {
    StandardizationParams p;
    p.feature_means = vec_from_json(j.at("feature_means"));
    p.feature_stds = vec_from_json(j.at("feature_stds"));
    p.target_means = vec_from_json(j.at("target_means"));
    p.target_stds = vec_from_json(j.at("target_stds"));
    return p;
}

json to_json(const Model& model) {
    json j;
    j["basis"] = to_json(model.basis);
    j["standardization"] = to_json(model.standardization);
    j["target_names"] = model.target_names;
    j["fits"] = json::array();
    for (const auto& fe : model.fits) {
        json f;
        f["lambda"] = fe.lambda;
        f["beta"] = vec_to_json(fe.beta);
        f["basis_ref"] = fe.basis_ref;
        j["fits"].push_back(std::move(f));
    }
    return j;
}

Model model_from_json(const json& j) {
    Model model;
    model.basis = basis_from_json(j.at("basis"));
    model.standardization = standardization_from_json(j.at("standardization"));
    model.target_names = j.at("target_names").get<std::vector<std::string>>();
    for (const auto& f : j.at("fits")) {
        FittedEnsemble fe;
        fe.lambda = f.at("lambda").get<double>();
        fe.beta = vec_from_json(f.at("beta"));
        fe.basis_ref = f.value("basis_ref", "");
        fe.members = model.basis.members();
        fe.features_per_member = model.basis.features_per_member();
        if (fe.beta.size() != model.basis.total_features())
            throw std::runtime_error("model json: beta size does not match basis");
        model.fits.push_back(std::move(fe));
    }
    return model;
}

void save_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

} // namespace ncl
