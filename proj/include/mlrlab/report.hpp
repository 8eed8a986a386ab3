#pragma once

#include <json.hpp>

#include "mlrlab/types.hpp"

namespace mlrlab {

/// FitReport as a JSON document:
/// {"model": [[beta_1...], ...], "labels": [...], "K_found", "restarts",
///  "final_w_th", "iterations", "elapsed_seconds"}. `model` lists one array
/// per component; labels are 1-based.
nlohmann::json to_json(const FitReport& report);
FitReport fit_report_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const MLRModel& model);
MLRModel model_from_json(const nlohmann::json& doc);

}  // namespace mlrlab
