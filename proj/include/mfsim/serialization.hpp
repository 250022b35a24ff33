#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "mfsim/cosim.hpp"
#include "mfsim/scenario.hpp"

namespace mfsim {

inline constexpr int kScenarioFormatVersion = 1;
inline constexpr int kRunLogFormatVersion = 1;

nlohmann::json to_json(const PlannerConfig& config);
PlannerConfig planner_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const VehicleParams& params);
VehicleParams vehicle_params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const VehicleCatalog& catalog);
VehicleCatalog vehicle_catalog_from_json(const nlohmann::json& j);
VehicleCatalog load_vehicle_catalog(const std::filesystem::path& path);
void save_vehicle_catalog(const VehicleCatalog& catalog, const std::filesystem::path& path);

nlohmann::json to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunLog& log);
RunLog run_log_from_json(const nlohmann::json& j);
void save_run_log(const RunLog& log, const std::filesystem::path& path);
RunLog load_run_log(const std::filesystem::path& path);

/// Compact per-step table: step, t, agent, planned x/y/heading/v,
/// executed x/y/heading/v, status.
std::string run_log_csv(const RunLog& log);
void save_run_log_csv(const RunLog& log, const std::filesystem::path& path);

nlohmann::json to_json(const BatchReport& report);
BatchReport batch_report_from_json(const nlohmann::json& j);
void save_batch_report(const BatchReport& report, const std::filesystem::path& path);
BatchReport load_batch_report(const std::filesystem::path& path);

/// Reads a whole file; throws IoError.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// FNV-1a 64-bit hex digest used for config provenance stamps.
std::string fnv1a_hex(const std::string& text);

}  // namespace mfsim
