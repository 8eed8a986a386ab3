#include "mlrlab/report.hpp"

#include "mlrlab/errors.hpp"

namespace mlrlab {

nlohmann::json to_json(const MLRModel& model) {
  auto out = nlohmann::json::array();
  for (const auto& beta : model.betas) out.push_back(std::vector<double>(beta.begin(), beta.end()));
  return out;
}

MLRModel model_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError("model: expected an array of components");
  MLRModel model;
  for (const auto& component : doc) {
    const auto values = component.get<std::vector<double>>();
    model.betas.emplace_back(Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size())));
  }
  model.validate();
  return model;
}

nlohmann::json to_json(const FitReport& report) {
  return {
      {"model", to_json(report.model)},
      {"labels", report.labels},
      {"K_found", report.K_found},
      {"restarts", report.restarts},
      {"final_w_th", report.final_w_th},
      {"iterations", report.iterations},
      {"elapsed_seconds", report.elapsed_seconds},
  };
}

FitReport fit_report_from_json(const nlohmann::json& doc) {
  try {
    FitReport report;
    report.model = model_from_json(doc.at("model"));
    report.labels = doc.at("labels").get<Labels>();
    report.K_found = doc.at("K_found").get<int>();
    report.restarts = doc.at("restarts").get<int>();
    report.final_w_th = doc.at("final_w_th").get<double>();
    report.iterations = doc.at("iterations").get<int>();
    report.elapsed_seconds = doc.at("elapsed_seconds").get<double>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("fit report: ") + e.what());
  }
}

}  // namespace mlrlab
