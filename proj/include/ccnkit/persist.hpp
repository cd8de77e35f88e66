#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "ccnkit/dependency.hpp"
#include "ccnkit/estimators.hpp"
#include "ccnkit/simgen.hpp"

namespace ccn {

inline constexpr int kModelSchemaVersion = 1;

/// Model document: schema_version, activation, propagation, loss_spec,
/// label_order, b, W {rows, cols, data} and C as [k, l, value] triples.
/// Doubles are written in shortest round-trip form, so load(save(m)) == m.
nlohmann::json model_to_json(const FittedModel& model);
FittedModel model_from_json(const nlohmann::json& doc);
void save_model(const std::filesystem::path& path, const FittedModel& model);
FittedModel load_model(const std::filesystem::path& path);

nlohmann::json params_to_json(const ModelParams& params);
ModelParams params_from_json(const nlohmann::json& doc);
nlohmann::json loss_spec_to_json(const LossSpec& spec);
LossSpec loss_spec_from_json(const nlohmann::json& doc);

/// The model schema plus sigma, realization and post_transform.
nlohmann::json design_to_json(const SimDesign& design);
SimDesign design_from_json(const nlohmann::json& doc);

nlohmann::json report_to_json(const DependencyReport& report);

}  // namespace ccn
