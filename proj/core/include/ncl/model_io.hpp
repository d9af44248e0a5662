#pragma once

#include <string>

#include <json.hpp>

#include "ncl/dataset.hpp"
#include "ncl/ensemble.hpp"
#include "ncl/rff.hpp"

namespace ncl {

nlohmann::json to_json(const RffEnsemble& basis);
RffEnsemble basis_from_json(const nlohmann::json& j);

nlohmann::json to_json(const StandardizationParams& p);
StandardizationParams standardization_from_json(const nlohmann::json& j);

// Self-contained model file: fitted coefficients per output column, the full
// basis, and the standardization parameters, so fit -> predict round trips
// work across processes without the original data.
struct Model {
    std::vector<FittedEnsemble> fits;  // one per output column
    RffEnsemble basis;
    StandardizationParams standardization;
    std::vector<std::string> target_names;
};

nlohmann::json to_json(const Model& model);
Model model_from_json(const nlohmann::json& j);

void save_json(const nlohmann::json& j, const std::string& path);
nlohmann::json load_json(const std::string& path);

} // namespace ncl
