// mfsim: batch pipeline for multi-fidelity co-simulation experiments.
// Subcommands: generate, run, compare, study-vehicles, demo, catalog.
// Exit codes: 0 success (including per-run failures in batch mode),
// 2 config/validation error, 3 refusal over existing outputs, 4 I/O error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "mfsim/cosim.hpp"
#include "mfsim/errors.hpp"
#include "mfsim/evaluation.hpp"
#include "mfsim/report.hpp"
#include "mfsim/scenario.hpp"
#include "mfsim/serialization.hpp"

#ifndef MFSIM_VERSION
#define MFSIM_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mfsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRefusal = 3;
constexpr int kExitIo = 4;

struct CliSettings {
    fs::path out_dir;
    fs::path config_file;
    fs::path catalog_file;
    bool force = false;
    int workers = 1;
    json config;  // parsed config file ({} when absent)

    VehicleCatalog catalog() const {
        if (!catalog_file.empty()) return load_vehicle_catalog(catalog_file);
        if (config.contains("catalog")) return vehicle_catalog_from_json(config["catalog"]);
        return VehicleCatalog::builtin();
    }
};

void load_config_file(CliSettings& settings) {
    if (settings.config_file.empty()) {
        settings.config = json::object();
        return;
    }
    try {
        settings.config = json::parse(read_text_file(settings.config_file));
    } catch (const json::parse_error& e) {
        throw ParseError(settings.config_file.string() + ": " + e.what());
    }
    if (!settings.config.is_object())
        throw ParseError(settings.config_file.string() + ": config root must be an object");
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

// Records the resolved effective config per command; created_utc is a
// wall-clock field and exempt from byte-identity guarantees.
void stamp_manifest(const CliSettings& settings, const std::string& command,
                    const json& effective) {
    fs::create_directories(settings.out_dir / "config");
    write_text_file(settings.out_dir / "config" / (command + "_effective.json"),
                    effective.dump(2) + "\n");
    const fs::path manifest_path = settings.out_dir / "manifest.json";
    json manifest;
    if (fs::exists(manifest_path)) {
        try {
            manifest = json::parse(read_text_file(manifest_path));
        } catch (const json::parse_error&) {
            manifest = json::object();
        }
    }
    manifest["tool"] = "mfsim";
    manifest["version"] = MFSIM_VERSION;
    manifest["entries"][command] = {{"config_hash", fnv1a_hex(effective.dump())},
                                    {"created_utc", utc_timestamp()}};
    write_text_file(manifest_path, manifest.dump(2) + "\n");
}

class RefusalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Refuses to overwrite an existing non-empty directory unless --force.
void claim_or_refuse(const fs::path& dir, bool force) {
    if (fs::exists(dir) && !fs::is_empty(dir)) {
        if (!force)
            throw RefusalError("output directory " + dir.string() +
                               " already exists; pass --force to overwrite");
        fs::remove_all(dir);
    }
    fs::create_directories(dir);
}

GridSpec resolve_grid(const CliSettings& settings, const std::string& preset,
                      std::vector<double> radii, std::vector<double> angles) {
    GridSpec grid;
    if (preset == "paper") {
        grid = paper_scale_grid();
    } else {
        grid = default_grid();
    }
    if (settings.config.contains("grid")) {
        const json& g = settings.config["grid"];
        if (g.contains("preset") && g["preset"].is_string() && preset.empty())
            grid = g["preset"] == "paper" ? paper_scale_grid() : default_grid();
        if (g.contains("radii_m")) grid.radii = g["radii_m"].get<std::vector<double>>();
        if (g.contains("angles_deg")) grid.angles_deg = g["angles_deg"].get<std::vector<double>>();
        if (g.contains("dedupe_straight")) grid.dedupe_straight = g["dedupe_straight"].get<bool>();
    }
    if (preset == "paper") grid = paper_scale_grid();
    if (preset == "default") grid = default_grid();
    if (!radii.empty()) grid.radii = std::move(radii);
    if (!angles.empty()) grid.angles_deg = std::move(angles);
    return grid;
}

ScenarioTemplate resolve_template(const CliSettings& settings) {
    ScenarioTemplate tmpl = default_template();
    if (settings.config.contains("road")) {
        const json& r = settings.config["road"];
        if (r.contains("entry_length_m")) tmpl.road.entry_length = r["entry_length_m"].get<double>();
        if (r.contains("exit_length_m")) tmpl.road.exit_length = r["exit_length_m"].get<double>();
        if (r.contains("lane_width_m")) tmpl.road.lane_width = r["lane_width_m"].get<double>();
        if (r.contains("sample_step_m")) tmpl.road.sample_step = r["sample_step_m"].get<double>();
    }
    if (settings.config.contains("agent")) {
        const json& a = settings.config["agent"];
        if (a.contains("initial_s_m")) tmpl.agent.initial_s = a["initial_s_m"].get<double>();
        if (a.contains("initial_lateral_offset_m"))
            tmpl.agent.initial_lateral_offset = a["initial_lateral_offset_m"].get<double>();
        if (a.contains("initial_speed_mps"))
            tmpl.agent.initial_speed = a["initial_speed_mps"].get<double>();
        if (a.contains("vehicle_model"))
            tmpl.agent.vehicle_model = a["vehicle_model"].get<std::string>();
    }
    if (settings.config.contains("planner"))
        tmpl.agent.planner = planner_config_from_json(settings.config["planner"]);
    if (settings.config.contains("scenario")) {
        const json& s = settings.config["scenario"];
        if (s.contains("dt_plan")) tmpl.dt_plan = s["dt_plan"].get<double>();
        if (s.contains("max_steps")) tmpl.max_steps = s["max_steps"].get<int>();
    }
    return tmpl;
}

RunConfig resolve_run_config(const CliSettings& settings, Fidelity backend) {
    RunConfig config;
    if (settings.config.contains("run")) config = run_config_from_json(settings.config["run"]);
    config.backend = backend;
    return config;
}

std::vector<Scenario> load_scenarios(const fs::path& source) {
    std::vector<Scenario> scenarios;
    if (fs::is_directory(source)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(source))
            if (entry.path().extension() == ".json") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const fs::path& file : files) scenarios.push_back(load_scenario(file));
    } else if (fs::exists(source)) {
        scenarios.push_back(load_scenario(source));
    } else {
        throw IoError("scenario source " + source.string() + " does not exist");
    }
    if (scenarios.empty()) throw ValidationError("no scenario files under " + source.string());
    return scenarios;
}

int cmd_generate(CliSettings& settings, const std::string& preset, std::vector<double> radii,
                 std::vector<double> angles, bool include_templates) {
    const GridSpec grid = resolve_grid(settings, preset, std::move(radii), std::move(angles));
    const ScenarioTemplate tmpl = resolve_template(settings);
    const std::vector<Scenario> scenarios = generate_grid(grid, tmpl);

    const fs::path dir = settings.out_dir / "scenarios";
    claim_or_refuse(dir, settings.force);
    for (const Scenario& scenario : scenarios)
        save_scenario(scenario, dir / (scenario.scenario_id + ".json"));
    if (include_templates) {
        const Scenario crossing = crossing_scenario();
        save_scenario(crossing, dir / (crossing.scenario_id + ".json"));
        const Scenario s_curve = study_s_curve_scenario();
        save_scenario(s_curve, dir / (s_curve.scenario_id + ".json"));
    }

    json effective;
    effective["grid"] = {{"radii_m", grid.radii},
                         {"angles_deg", grid.angles_deg},
                         {"dedupe_straight", grid.dedupe_straight}};
    effective["count"] = scenarios.size();
    effective["include_templates"] = include_templates;
    stamp_manifest(settings, "generate", effective);

    std::cout << scenarios.size() << " scenarios\n";
    return kExitOk;
}

int cmd_run(CliSettings& settings, fs::path scenario_source, const std::string& backend_arg,
            const fs::path& runs_subdir = "runs") {
    if (scenario_source.empty()) scenario_source = settings.out_dir / "scenarios";
    const std::vector<Scenario> scenarios = load_scenarios(scenario_source);

    std::vector<RunConfig> configs;
    if (backend_arg == "low" || backend_arg == "both")
        configs.push_back(resolve_run_config(settings, Fidelity::low));
    if (backend_arg == "high" || backend_arg == "both")
        configs.push_back(resolve_run_config(settings, Fidelity::high));
    if (configs.empty())
        throw ValidationError("--backend must be low, high or both, got '" + backend_arg + "'");

    const fs::path runs_dir = settings.out_dir / runs_subdir;
    claim_or_refuse(runs_dir, settings.force);

    const VehicleCatalog catalog = settings.catalog();
    BatchResult result = run_batch(scenarios, configs, settings.workers, catalog);

    for (size_t i = 0; i < result.logs.size(); ++i) {
        BatchRunRef& ref = result.report.runs[i];
        const fs::path backend_dir = runs_dir / to_string(ref.backend);
        fs::create_directories(backend_dir);
        const std::string stem = ref.scenario_id + "__" + to_string(ref.backend);
        const fs::path log_path = backend_dir / (stem + ".json");
        save_run_log(result.logs[i], log_path);
        save_run_log_csv(result.logs[i], backend_dir / (stem + ".csv"));
        ref.log_path = fs::relative(log_path, settings.out_dir).string();
    }
    save_batch_report(result.report, runs_dir / "batch_report.json");

    json effective;
    effective["backend"] = backend_arg;
    effective["workers"] = settings.workers;
    effective["scenario_count"] = scenarios.size();
    effective["run"] = to_json(resolve_run_config(settings, Fidelity::low));
    stamp_manifest(settings, runs_subdir.string(), effective);

    int failures = 0;
    for (const BatchRunRef& ref : result.report.runs)
        if (!ref.completed) ++failures;
    std::cout << result.report.runs.size() << " runs (" << failures << " failed)\n";
    if (!result.report.stats.empty())
        std::cout << runtime_stats_table(result.report.stats);
    return kExitOk;  // per-run failures are data, not process failure
}

struct LogPair {
    std::string scenario_id;
    std::optional<RunLog> low;
    std::optional<RunLog> high;
};

std::vector<LogPair> collect_pairs(const fs::path& runs_dir) {
    std::map<std::string, LogPair> pairs;
    for (const char* backend : {"low", "high"}) {
        const fs::path dir = runs_dir / backend;
        if (!fs::is_directory(dir)) continue;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.path().extension() == ".json") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const fs::path& file : files) {
            RunLog log = load_run_log(file);
            if (!log.completed) continue;
            LogPair& pair = pairs[log.scenario_id];
            pair.scenario_id = log.scenario_id;
            if (log.backend == Fidelity::low)
                pair.low = std::move(log);
            else
                pair.high = std::move(log);
        }
    }
    std::vector<LogPair> out;
    for (auto& [_, pair] : pairs) out.push_back(std::move(pair));
    return out;
}

int cmd_compare(CliSettings& settings, const std::string& metric,
                const std::string& reference_mode) {
    const fs::path runs_dir = settings.out_dir / "runs";
    const fs::path scenario_dir = settings.out_dir / "scenarios";
    const fs::path reports_dir = settings.out_dir / "reports";
    fs::create_directories(reports_dir);

    const std::vector<LogPair> pairs = collect_pairs(runs_dir);
    if (pairs.empty()) throw ValidationError("no completed run logs under " + runs_dir.string());

    const HeatmapMetric heat_metric =
        metric == "mean" ? HeatmapMetric::mean_abs_d : HeatmapMetric::max_abs_d;

    std::vector<HeatmapCell> cells;
    json summary;
    summary["metric"] = metric;
    summary["reference"] = reference_mode;
    json gaps = json::array();
    json per_scenario = json::object();

    for (const LogPair& pair : pairs) {
        std::vector<ErrorMetrics> metrics;
        const RunLog* reference = nullptr;
        const RunLog* comparison = nullptr;
        if (reference_mode == "planned") {
            if (!pair.high) {
                gaps.push_back({{"scenario_id", pair.scenario_id}, {"missing", "high"}});
                continue;
            }
            metrics = compare_planned_vs_executed(*pair.high);
            reference = &*pair.high;
            comparison = &*pair.high;
        } else {
            if (!pair.low || !pair.high) {
                gaps.push_back({{"scenario_id", pair.scenario_id},
                                {"missing", !pair.low ? "low" : "high"}});
                continue;
            }
            metrics = compare_runs(*pair.low, *pair.high);
            reference = &*pair.low;
            comparison = &*pair.high;
        }
        if (metrics.empty()) continue;

        double aggregate = 0.0;
        json agents = json::object();
        for (const ErrorMetrics& m : metrics) {
            const double value =
                heat_metric == HeatmapMetric::max_abs_d ? m.max_abs_d : m.mean_abs_d;
            aggregate = std::max(aggregate, value);
            agents[std::to_string(m.agent_id)] = {{"max_abs_d", m.max_abs_d},
                                                  {"mean_abs_d", m.mean_abs_d},
                                                  {"rmse_pos", m.rmse_pos},
                                                  {"rmse_v", m.rmse_v},
                                                  {"max_abs_orientation", m.max_abs_orientation},
                                                  {"aligned_count", m.aligned_count}};
        }
        per_scenario[pair.scenario_id] = agents;

        const fs::path scenario_file = scenario_dir / (pair.scenario_id + ".json");
        if (fs::exists(scenario_file)) {
            const Scenario scenario = load_scenario(scenario_file);
            render_reports(scenario, *reference, *comparison, metrics, reports_dir);
        }

        double radius = 0.0, angle_deg = 0.0;
        if (parse_grid_scenario_id(pair.scenario_id, radius, angle_deg))
            cells.push_back({radius, angle_deg, aggregate});
    }

    if (!cells.empty()) {
        // The straight scenario has no radius of its own; report it per
        // grid radius so every row shows its zero-angle baseline.
        std::vector<HeatmapCell> expanded;
        std::optional<double> straight_value;
        std::vector<double> radii;
        for (const HeatmapCell& cell : cells) {
            if (cell.radius == 0.0)
                straight_value = cell.value;
            else {
                expanded.push_back(cell);
                if (std::find(radii.begin(), radii.end(), cell.radius) == radii.end())
                    radii.push_back(cell.radius);
            }
        }
        if (straight_value)
            for (double r : radii) expanded.push_back({r, 0.0, *straight_value});
        const HeatmapTable table = aggregate_grid(expanded);
        render_heatmap(table, metric, reports_dir);
        summary["heatmap_missing_cells"] = table.missing_count();
    }

    summary["gaps"] = std::move(gaps);
    summary["scenarios"] = std::move(per_scenario);
    write_text_file(reports_dir / "compare_summary.json", summary.dump(2) + "\n");

    const fs::path report_path = runs_dir / "batch_report.json";
    if (fs::exists(report_path)) {
        const BatchReport report = load_batch_report(report_path);
        write_text_file(reports_dir / "runtime_stats.csv",
                        runtime_stats_table(runtime_stats(report)));
    }

    json effective;
    effective["metric"] = metric;
    effective["reference"] = reference_mode;
    stamp_manifest(settings, "compare", effective);

    std::cout << "compared " << per_scenario.size() << " scenarios, " << summary["gaps"].size()
              << " gaps\n";
    return kExitOk;
}

int cmd_study_vehicles(CliSettings& settings, const fs::path& scenario_file,
                       std::vector<std::string> models) {
    if (models.empty()) models = {"touring", "offroad", "citycar"};
    const VehicleCatalog catalog = settings.catalog();
    for (const std::string& model : models) catalog.lookup(model);  // may throw CatalogError

    Scenario scenario =
        scenario_file.empty() ? study_s_curve_scenario() : load_scenario(scenario_file);

    const fs::path study_dir = settings.out_dir / "reports" / "vehicle_study";
    claim_or_refuse(study_dir, settings.force);

    RunConfig low_config = resolve_run_config(settings, Fidelity::low);
    const RunLog reference = run_scenario(scenario, low_config, catalog);

    json ranking = json::array();
    std::vector<std::pair<std::string, double>> max_d_by_model;
    std::vector<Curve> d_curves, v_curves;
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    Curve v_ref_curve;
    v_ref_curve.label = "planned (low fidelity)";
    v_ref_curve.color = "#555555";

    for (size_t i = 0; i < models.size(); ++i) {
        Scenario variant = scenario;
        for (AgentSpec& agent : variant.agents) agent.vehicle_model = models[i];
        RunConfig high_config = resolve_run_config(settings, Fidelity::high);
        const RunLog log = run_scenario(variant, high_config, catalog);
        const auto metrics = compare_runs(reference, log);
        if (metrics.empty()) throw ComparisonError("no aligned agents in the study run");
        const ErrorMetrics& m = metrics.front();

        write_text_file(study_dir / (scenario.scenario_id + "__" + models[i] + "__d_over_s.csv"),
                        displacement_csv(m.lateral));
        write_text_file(study_dir / (scenario.scenario_id + "__" + models[i] + "__v_over_t.csv"),
                        velocity_csv(m));

        Curve d_curve;
        d_curve.label = models[i];
        d_curve.color = colors[i % 4];
        for (const DisplacementSample& s : m.lateral) {
            d_curve.x.push_back(s.s);
            d_curve.y.push_back(s.d);
        }
        d_curves.push_back(std::move(d_curve));

        Curve v_curve;
        v_curve.label = models[i];
        v_curve.color = colors[i % 4];
        v_curve.x = m.t;
        v_curve.y = m.v_cmp;
        v_curves.push_back(std::move(v_curve));
        if (v_ref_curve.x.empty()) {
            v_ref_curve.x = m.t;
            v_ref_curve.y = m.v_ref;
        }

        ranking.push_back({{"model", models[i]},
                           {"max_abs_d", m.max_abs_d},
                           {"mean_abs_d", m.mean_abs_d},
                           {"rmse_v", m.rmse_v},
                           {"termination", to_string(log.termination.at(
                                               variant.agents[0].agent_id).reason)}});
        max_d_by_model.push_back({models[i], m.max_abs_d});
    }

    v_curves.insert(v_curves.begin(), v_ref_curve);
    write_text_file(study_dir / (scenario.scenario_id + "__d_over_s.svg"),
                    curves_svg(d_curves, scenario.scenario_id + ": lateral displacement by model",
                               "s (m)", "d (m)"));
    write_text_file(study_dir / (scenario.scenario_id + "__v_over_t.svg"),
                    curves_svg(v_curves, scenario.scenario_id + ": velocity profiles by model",
                               "t (s)", "v (m/s)"));

    std::sort(max_d_by_model.begin(), max_d_by_model.end(),
              [](const auto& a, const auto& b) { return a.second > b.second; });
    json summary;
    summary["scenario_id"] = scenario.scenario_id;
    summary["ranking_by_max_abs_d"] = json::array();
    for (const auto& [model, value] : max_d_by_model)
        summary["ranking_by_max_abs_d"].push_back({{"model", model}, {"max_abs_d", value}});
    summary["models"] = std::move(ranking);
    write_text_file(study_dir / "study_summary.json", summary.dump(2) + "\n");

    json effective;
    effective["models"] = models;
    effective["scenario"] = scenario.scenario_id;
    stamp_manifest(settings, "study-vehicles", effective);

    std::cout << "vehicle study on " << scenario.scenario_id << ":\n";
    for (const auto& [model, value] : max_d_by_model) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "  %-8s max|d| = %.3f m\n", model.c_str(), value);
        std::cout << buf;
    }
    return kExitOk;
}

int cmd_demo(CliSettings& settings) {
    std::cout << "[demo] generating the default grid\n";
    cmd_generate(settings, "default", {}, {}, true);
    std::cout << "[demo] running both backends\n";
    cmd_run(settings, {}, "both");
    std::cout << "[demo] comparing fidelities\n";
    cmd_compare(settings, "max", "lofi");
    std::cout << "[demo] vehicle study\n";
    cmd_study_vehicles(settings, {}, {});

    std::cout << "[demo] paper-scale runtime table (78 scenarios)\n";
    const GridSpec grid = paper_scale_grid();
    const std::vector<Scenario> scenarios = generate_grid(grid, resolve_template(settings));
    const std::vector<RunConfig> configs = {resolve_run_config(settings, Fidelity::low),
                                            resolve_run_config(settings, Fidelity::high)};
    const BatchResult result =
        run_batch(scenarios, configs, settings.workers, settings.catalog());
    const fs::path dir = settings.out_dir / "reports";
    fs::create_directories(dir);
    save_batch_report(result.report, dir / "paper_scale_batch_report.json");
    const std::string table = runtime_stats_table(result.report.stats);
    write_text_file(dir / "paper_scale_runtime_stats.csv", table);
    std::cout << table;
    stamp_manifest(settings, "demo", json{{"scenarios", scenarios.size()}});
    return kExitOk;
}

int cmd_catalog(CliSettings& settings, const fs::path& out_file) {
    const VehicleCatalog catalog = settings.catalog();
    const std::string text = to_json(catalog).dump(2) + "\n";
    if (out_file.empty())
        std::cout << text;
    else
        write_text_file(out_file, text);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-fidelity co-simulation pipeline for sampling-based motion planners"};
    app.set_version_flag("--version", MFSIM_VERSION);
    app.require_subcommand(1);

    CliSettings settings;

    auto add_common = [&](CLI::App* cmd, bool needs_out = true) {
        if (needs_out)
            cmd->add_option("--out", settings.out_dir, "Experiment output directory")
                ->required();
        cmd->add_option("--config", settings.config_file,
                        "JSON config file (flags override file values)");
        cmd->add_option("--vehicle-catalog", settings.catalog_file,
                        "Vehicle catalog override file");
        cmd->add_flag("--force", settings.force, "Overwrite existing outputs");
    };

    // generate
    std::string preset;
    std::vector<double> radii, angles;
    bool include_templates = false;
    CLI::App* generate = app.add_subcommand("generate", "Write a scenario library from a grid");
    add_common(generate);
    generate->add_option("--preset", preset, "Grid preset: default (49) or paper (78)")
        ->check(CLI::IsMember({"default", "paper"}));
    generate->add_option("--radii", radii, "Turn radii in meters")->delimiter(',');
    generate->add_option("--angles", angles, "Turn angles in degrees (0 = straight)")->delimiter(',');
    generate->add_flag("--include-templates", include_templates,
                       "Also emit the crossing and S-curve template scenarios");

    // run
    fs::path scenario_source;
    std::string backend = "both";
    CLI::App* run = app.add_subcommand("run", "Execute scenarios on the simulation backends");
    add_common(run);
    run->add_option("--scenarios", scenario_source,
                    "Scenario file or directory (default: <out>/scenarios)");
    run->add_option("--backend", backend, "Backend: low, high or both")
        ->check(CLI::IsMember({"low", "high", "both"}));
    run->add_option("--workers", settings.workers, "Concurrent runs")
        ->check(CLI::PositiveNumber);

    // compare
    std::string metric = "max";
    std::string reference_mode = "lofi";
    CLI::App* compare = app.add_subcommand("compare", "Compute cross-fidelity error metrics");
    add_common(compare);
    compare->add_option("--metric", metric, "Heatmap aggregate: max or mean")
        ->check(CLI::IsMember({"max", "mean"}));
    compare->add_option("--reference", reference_mode,
                        "Displacement reference: lofi (executed) or planned")
        ->check(CLI::IsMember({"lofi", "planned"}));

    // study-vehicles
    fs::path study_scenario;
    std::vector<std::string> models;
    CLI::App* study = app.add_subcommand("study-vehicles",
                                         "Run one scenario with several vehicle models");
    add_common(study);
    study->add_option("--scenario", study_scenario,
                      "Scenario file (default: built-in S-curve study scenario)");
    study->add_option("--models", models, "Vehicle model ids")->delimiter(',');

    // demo
    CLI::App* demo = app.add_subcommand(
        "demo", "Full study: grid + both backends + comparison + vehicle study + runtime table");
    add_common(demo);
    demo->add_option("--workers", settings.workers, "Concurrent runs")
        ->check(CLI::PositiveNumber);

    // catalog
    fs::path catalog_out;
    CLI::App* catalog_cmd = app.add_subcommand("catalog", "Dump the vehicle catalog");
    add_common(catalog_cmd, /*needs_out=*/false);
    catalog_cmd->add_option("--out", catalog_out, "Write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        load_config_file(settings);
        if (generate->parsed())
            return cmd_generate(settings, preset, radii, angles, include_templates);
        if (run->parsed()) return cmd_run(settings, scenario_source, backend);
        if (compare->parsed()) return cmd_compare(settings, metric, reference_mode);
        if (study->parsed()) return cmd_study_vehicles(settings, study_scenario, models);
        if (demo->parsed()) return cmd_demo(settings);
        if (catalog_cmd->parsed()) return cmd_catalog(settings, catalog_out);
    } catch (const RefusalError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitRefusal;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const CatalogError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitConfig;
}
