#include "mfsim/serialization.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mfsim/errors.hpp"

namespace mfsim {

using nlohmann::json;

namespace {

const json& require(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.is_object()) throw ParseError(ctx + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(ctx + ": missing field '" + key + "'");
    return *it;
}

double num(const json& j, const std::string& key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_number()) throw ParseError(ctx + ": field '" + key + "' must be a number");
    return v.get<double>();
}

double num_or(const json& j, const std::string& key, double fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ParseError("field '" + key + "' must be a number");
    return j[key].get<double>();
}

int integer(const json& j, const std::string& key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_number_integer()) throw ParseError(ctx + ": field '" + key + "' must be an integer");
    return v.get<int>();
}

std::string str(const json& j, const std::string& key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_string()) throw ParseError(ctx + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<double> num_array(const json& j, const std::string& key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_array()) throw ParseError(ctx + ": field '" + key + "' must be an array");
    std::vector<double> out;
    for (const json& e : v) {
        if (!e.is_number()) throw ParseError(ctx + ": field '" + key + "' must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

// File angles are degrees; conversions use the one shared constant so that
// degree-authored values survive save/load bitwise.
constexpr double kDegToRad = kPi / 180.0;
double file_deg(double rad) { return rad / kDegToRad; }
double file_rad(double deg) { return deg * kDegToRad; }

Fidelity fidelity_from_string(const std::string& s, const std::string& ctx) {
    if (s == "low") return Fidelity::low;
    if (s == "high") return Fidelity::high;
    throw ParseError(ctx + ": backend must be 'low' or 'high', got '" + s + "'");
}

Termination termination_from_string(const std::string& s) {
    for (Termination t : {Termination::none, Termination::goal_reached, Termination::timeout,
                          Termination::off_road, Termination::collision,
                          Termination::dynamics_error})
        if (s == to_string(t)) return t;
    throw ParseError("unknown termination '" + s + "'");
}

}  // namespace

json to_json(const PlannerConfig& c) {
    json j;
    j["target_speed_mps"] = c.target_speed;
    j["lateral_offsets_m"] = c.lateral_offsets;
    j["horizons_s"] = c.horizons;
    j["k_jerk"] = c.k_jerk;
    j["k_time"] = c.k_time;
    j["k_lat_dev"] = c.k_lat_dev;
    j["k_speed_dev"] = c.k_speed_dev;
    j["v_max_mps"] = c.v_max;
    j["a_max_mps2"] = c.a_max;
    j["kappa_max_per_m"] = c.kappa_max;
    j["lane_width_m"] = c.lane_width;
    j["vehicle_length_m"] = c.vehicle_length;
    j["vehicle_width_m"] = c.vehicle_width;
    j["launch_speed_threshold_mps"] = c.launch_speed_threshold;
    return j;
}

PlannerConfig planner_config_from_json(const json& j) {
    PlannerConfig base = PlannerConfig::defaults();
    const std::string ctx = "planner";
    if (!j.is_object()) throw ParseError(ctx + ": expected an object");
    base.target_speed = num_or(j, "target_speed_mps", base.target_speed);
    if (j.contains("lateral_offsets_m")) base.lateral_offsets = num_array(j, "lateral_offsets_m", ctx);
    if (j.contains("horizons_s")) base.horizons = num_array(j, "horizons_s", ctx);
    base.k_jerk = num_or(j, "k_jerk", base.k_jerk);
    base.k_time = num_or(j, "k_time", base.k_time);
    base.k_lat_dev = num_or(j, "k_lat_dev", base.k_lat_dev);
    base.k_speed_dev = num_or(j, "k_speed_dev", base.k_speed_dev);
    base.v_max = num_or(j, "v_max_mps", base.v_max);
    base.a_max = num_or(j, "a_max_mps2", base.a_max);
    base.kappa_max = num_or(j, "kappa_max_per_m", base.kappa_max);
    base.lane_width = num_or(j, "lane_width_m", base.lane_width);
    base.vehicle_length = num_or(j, "vehicle_length_m", base.vehicle_length);
    base.vehicle_width = num_or(j, "vehicle_width_m", base.vehicle_width);
    base.launch_speed_threshold = num_or(j, "launch_speed_threshold_mps", base.launch_speed_threshold);
    validate(base);
    return base;
}

json to_json(const VehicleParams& p) {
    json j;
    j["model_id"] = p.model_id;
    j["wheelbase"] = p.wheelbase;
    j["length"] = p.length;
    j["width"] = p.width;
    j["mass"] = p.mass;
    j["delta_max"] = p.delta_max;
    j["steer_rate_max"] = p.steer_rate_max;
    j["a_accel_max"] = p.a_accel_max;
    j["a_brake_max"] = p.a_brake_max;
    j["v_max"] = p.v_max;
    j["tau_steer"] = p.tau_steer;
    j["tau_accel"] = p.tau_accel;
    j["mu"] = p.mu;
    return j;
}

VehicleParams vehicle_params_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("vehicle params: expected an object");
    VehicleParams base;
    const std::string id = str(j, "model_id", "vehicle params");
    const auto& builtin = VehicleCatalog::builtin().entries();
    if (auto it = builtin.find(id); it != builtin.end()) base = it->second;
    base.model_id = id;
    base.wheelbase = num_or(j, "wheelbase", base.wheelbase);
    base.length = num_or(j, "length", base.length);
    base.width = num_or(j, "width", base.width);
    base.mass = num_or(j, "mass", base.mass);
    base.delta_max = num_or(j, "delta_max", base.delta_max);
    base.steer_rate_max = num_or(j, "steer_rate_max", base.steer_rate_max);
    base.a_accel_max = num_or(j, "a_accel_max", base.a_accel_max);
    base.a_brake_max = num_or(j, "a_brake_max", base.a_brake_max);
    base.v_max = num_or(j, "v_max", base.v_max);
    base.tau_steer = num_or(j, "tau_steer", base.tau_steer);
    base.tau_accel = num_or(j, "tau_accel", base.tau_accel);
    base.mu = num_or(j, "mu", base.mu);
    validate(base);
    return base;
}

json to_json(const VehicleCatalog& catalog) {
    json j = json::object();
    for (const auto& [id, params] : catalog.entries()) j[id] = to_json(params);
    return j;
}

VehicleCatalog vehicle_catalog_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("vehicle catalog: expected an object of models");
    VehicleCatalog catalog = VehicleCatalog::builtin();
    for (const auto& [id, entry] : j.items()) {
        json with_id = entry;
        with_id["model_id"] = id;
        catalog.set(vehicle_params_from_json(with_id));
    }
    return catalog;
}

VehicleCatalog load_vehicle_catalog(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("vehicle catalog: ") + e.what());
    }
    return vehicle_catalog_from_json(j);
}

void save_vehicle_catalog(const VehicleCatalog& catalog, const std::filesystem::path& path) {
    write_text_file(path, to_json(catalog).dump(2) + "\n");
}

namespace {

json road_to_json(const PlacedRoad& road) {
    json j;
    if (road.turn) {
        const RoadSpec& spec = *road.turn;
        j["entry_length_m"] = spec.entry_length;
        if (spec.radius) j["radius_m"] = *spec.radius;
        j["turn_angle_deg"] = file_deg(spec.turn_angle);
        j["exit_length_m"] = spec.exit_length;
        j["lane_width_m"] = spec.lane_width;
        j["sample_step_m"] = spec.sample_step;
    } else {
        json segs = json::array();
        for (const RoadSegment& seg : road.segments) {
            json s;
            if (seg.kind == RoadSegment::Kind::straight) {
                s["type"] = "straight";
                s["length_m"] = seg.length;
            } else {
                s["type"] = "arc";
                s["radius_m"] = seg.radius;
                s["angle_deg"] = file_deg(seg.angle);
            }
            segs.push_back(std::move(s));
        }
        j["segments"] = std::move(segs);
        j["lane_width_m"] = road.lane_width;
        j["sample_step_m"] = road.sample_step;
    }
    if (!(road.origin == Pose2{})) {
        j["origin"] = {{"x_m", road.origin.x},
                       {"y_m", road.origin.y},
                       {"heading_deg", file_deg(road.origin.heading)}};
    }
    return j;
}

PlacedRoad road_from_json(const json& j) {
    const std::string ctx = "road";
    if (!j.is_object()) throw ParseError(ctx + ": expected an object");
    PlacedRoad road;
    if (j.contains("segments")) {
        const json& segs = j["segments"];
        if (!segs.is_array() || segs.empty())
            throw ParseError(ctx + ": 'segments' must be a non-empty array");
        for (const json& s : segs) {
            const std::string type = str(s, "type", "road segment");
            if (type == "straight") {
                road.segments.push_back(RoadSegment::make_straight(num(s, "length_m", ctx)));
            } else if (type == "arc") {
                road.segments.push_back(RoadSegment::make_arc(
                    num(s, "radius_m", ctx), file_rad(num(s, "angle_deg", ctx))));
            } else {
                throw ParseError(ctx + ": segment type must be 'straight' or 'arc'");
            }
        }
        road.lane_width = num(j, "lane_width_m", ctx);
        road.sample_step = num(j, "sample_step_m", ctx);
    } else {
        RoadSpec spec;
        spec.entry_length = num(j, "entry_length_m", ctx);
        if (j.contains("radius_m") && !j["radius_m"].is_null())
            spec.radius = num(j, "radius_m", ctx);
        spec.turn_angle = file_rad(num(j, "turn_angle_deg", ctx));
        spec.exit_length = num(j, "exit_length_m", ctx);
        spec.lane_width = num(j, "lane_width_m", ctx);
        spec.sample_step = num(j, "sample_step_m", ctx);
        road.turn = spec;
    }
    if (j.contains("origin")) {
        const json& o = j["origin"];
        road.origin = {num(o, "x_m", "origin"), num(o, "y_m", "origin"),
                       file_rad(num(o, "heading_deg", "origin"))};
    }
    return road;
}

json agent_to_json(const AgentSpec& a) {
    json j;
    j["agent_id"] = a.agent_id;
    j["lanelet_index"] = a.lanelet_index;
    j["initial_s_m"] = a.initial_s;
    j["initial_lateral_offset_m"] = a.initial_lateral_offset;
    j["initial_speed_mps"] = a.initial_speed;
    j["vehicle_model"] = a.vehicle_model;
    j["goal"] = {{"center_x_m", a.goal.center.x},
                 {"center_y_m", a.goal.center.y},
                 {"radius_m", a.goal.radius}};
    j["planner"] = to_json(a.planner);
    return j;
}

AgentSpec agent_from_json(const json& j) {
    const std::string ctx = "agent";
    AgentSpec a;
    a.agent_id = integer(j, "agent_id", ctx);
    a.lanelet_index = j.contains("lanelet_index") ? integer(j, "lanelet_index", ctx) : 0;
    a.initial_s = num(j, "initial_s_m", ctx);
    a.initial_lateral_offset = num_or(j, "initial_lateral_offset_m", 0.0);
    a.initial_speed = num_or(j, "initial_speed_mps", 0.0);
    a.vehicle_model = str(j, "vehicle_model", ctx);
    const json& goal = require(j, "goal", ctx);
    a.goal.center = {num(goal, "center_x_m", "goal"), num(goal, "center_y_m", "goal")};
    a.goal.radius = num(goal, "radius_m", "goal");
    a.planner = j.contains("planner") ? planner_config_from_json(j["planner"])
                                      : PlannerConfig::defaults();
    return a;
}

}  // namespace

json to_json(const Scenario& scenario) {
    json j;
    j["format_version"] = kScenarioFormatVersion;
    j["scenario_id"] = scenario.scenario_id;
    j["units"] = {{"length", "m"}, {"angle", "deg"}, {"speed", "m/s"}, {"time", "s"}};
    if (scenario.roads.size() == 1) {
        j["road"] = road_to_json(scenario.roads.front());
    } else {
        json roads = json::array();
        for (const PlacedRoad& road : scenario.roads) roads.push_back(road_to_json(road));
        j["road"] = std::move(roads);
    }
    json agents = json::array();
    for (const AgentSpec& agent : scenario.agents) agents.push_back(agent_to_json(agent));
    j["agents"] = std::move(agents);
    j["dt_plan"] = scenario.dt_plan;
    j["max_steps"] = scenario.max_steps;
    return j;
}

Scenario scenario_from_json(const json& j) {
    const std::string ctx = "scenario";
    const int version = integer(j, "format_version", ctx);
    if (version != kScenarioFormatVersion)
        throw ParseError(ctx + ": unsupported format_version " + std::to_string(version));
    Scenario scenario;
    scenario.scenario_id = str(j, "scenario_id", ctx);
    const json& road = require(j, "road", ctx);
    if (road.is_array()) {
        for (const json& r : road) scenario.roads.push_back(road_from_json(r));
    } else {
        scenario.roads.push_back(road_from_json(road));
    }
    const json& agents = require(j, "agents", ctx);
    if (!agents.is_array()) throw ParseError(ctx + ": field 'agents' must be an array");
    for (const json& a : agents) scenario.agents.push_back(agent_from_json(a));
    scenario.dt_plan = num(j, "dt_plan", ctx);
    scenario.max_steps = integer(j, "max_steps", ctx);
    scenario.validate();
    return scenario;
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    scenario.validate();
    write_text_file(path, to_json(scenario).dump(2) + "\n");
}

Scenario load_scenario(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    try {
        return scenario_from_json(j);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

json to_json(const RunConfig& c) {
    json j;
    j["backend"] = to_string(c.backend);
    j["dt_plan"] = c.dt_plan;
    j["substeps"] = c.substeps;
    j["max_steps"] = c.max_steps;
    j["goal_speed_threshold"] = c.goal_speed_threshold;
    j["seed"] = c.seed;
    j["noise_accel_std"] = c.noise_accel_std;
    j["snapshot_samples"] = c.snapshot_samples;
    return j;
}

RunConfig run_config_from_json(const json& j) {
    const std::string ctx = "run config";
    RunConfig c;
    if (j.contains("backend")) c.backend = fidelity_from_string(str(j, "backend", ctx), ctx);
    c.dt_plan = num_or(j, "dt_plan", c.dt_plan);
    if (j.contains("substeps")) c.substeps = integer(j, "substeps", ctx);
    if (j.contains("max_steps")) c.max_steps = integer(j, "max_steps", ctx);
    c.goal_speed_threshold = num_or(j, "goal_speed_threshold", c.goal_speed_threshold);
    if (j.contains("seed")) c.seed = j["seed"].get<unsigned long long>();
    c.noise_accel_std = num_or(j, "noise_accel_std", c.noise_accel_std);
    if (j.contains("snapshot_samples")) c.snapshot_samples = integer(j, "snapshot_samples", ctx);
    validate(c);
    return c;
}

namespace {

json sample_to_json(const TrajectorySample& s) {
    return json::array({s.t, s.x, s.y, s.heading, s.v, s.a, s.curvature});
}

TrajectorySample sample_from_json(const json& j) {
    if (!j.is_array() || j.size() != 7) throw ParseError("trajectory sample must be a 7-array");
    TrajectorySample s;
    s.t = j[0].get<double>();
    s.x = j[1].get<double>();
    s.y = j[2].get<double>();
    s.heading = j[3].get<double>();
    s.v = j[4].get<double>();
    s.a = j[5].get<double>();
    s.curvature = j[6].get<double>();
    return s;
}

json state_to_json(const VehicleState& s) {
    return {{"x", s.x}, {"y", s.y}, {"heading", s.heading}, {"v", s.v},
            {"a", s.a}, {"steer", s.steer}, {"t", s.t}};
}

VehicleState state_from_json(const json& j) {
    VehicleState s;
    s.x = num(j, "x", "state");
    s.y = num(j, "y", "state");
    s.heading = num(j, "heading", "state");
    s.v = num(j, "v", "state");
    s.a = num(j, "a", "state");
    s.steer = num(j, "steer", "state");
    s.t = num(j, "t", "state");
    return s;
}

}  // namespace

json to_json(const RunLog& log) {
    json j;
    j["format_version"] = kRunLogFormatVersion;
    j["scenario_id"] = log.scenario_id;
    j["backend"] = to_string(log.backend);
    j["config"] = to_json(log.config);
    j["completed"] = log.completed;
    j["error"] = log.error;
    j["wall_clock_seconds"] = log.wall_clock_seconds;
    json term = json::object();
    for (const auto& [agent_id, t] : log.termination)
        term[std::to_string(agent_id)] = {{"reason", to_string(t.reason)},
                                          {"step_index", t.step_index}};
    j["termination"] = std::move(term);
    json steps = json::array();
    for (const StepRecord& record : log.steps) {
        json r;
        r["step"] = record.step_index;
        r["t"] = record.t;
        json agents = json::array();
        for (const AgentStepRecord& a : record.agents) {
            json e;
            e["agent_id"] = a.agent_id;
            e["status"] = to_string(a.status);
            e["executed"] = state_to_json(a.executed);
            e["planned_ref"] = sample_to_json(a.planned_ref);
            if (a.command)
                e["command"] = {{"steer_target", a.command->steer_target},
                                {"accel_target", a.command->accel_target}};
            if (!a.plan_snapshot.empty()) {
                json snap = json::array();
                for (const TrajectorySample& s : a.plan_snapshot) snap.push_back(sample_to_json(s));
                e["plan_snapshot"] = std::move(snap);
            }
            agents.push_back(std::move(e));
        }
        r["agents"] = std::move(agents);
        steps.push_back(std::move(r));
    }
    j["steps"] = std::move(steps);
    return j;
}

RunLog run_log_from_json(const json& j) {
    const std::string ctx = "run log";
    const int version = integer(j, "format_version", ctx);
    if (version != kRunLogFormatVersion)
        throw ParseError(ctx + ": unsupported format_version " + std::to_string(version));
    RunLog log;
    log.scenario_id = str(j, "scenario_id", ctx);
    log.backend = fidelity_from_string(str(j, "backend", ctx), ctx);
    log.config = run_config_from_json(require(j, "config", ctx));
    log.completed = require(j, "completed", ctx).get<bool>();
    log.error = str(j, "error", ctx);
    log.wall_clock_seconds = num(j, "wall_clock_seconds", ctx);
    for (const auto& [key, value] : require(j, "termination", ctx).items()) {
        AgentTermination t;
        t.reason = termination_from_string(str(value, "reason", ctx));
        t.step_index = integer(value, "step_index", ctx);
        log.termination[std::stoi(key)] = t;
    }
    for (const json& r : require(j, "steps", ctx)) {
        StepRecord record;
        record.step_index = integer(r, "step", ctx);
        record.t = num(r, "t", ctx);
        for (const json& e : require(r, "agents", ctx)) {
            AgentStepRecord a;
            a.agent_id = integer(e, "agent_id", ctx);
            a.status = str(e, "status", ctx) == "fallback" ? PlannerStatus::fallback
                                                           : PlannerStatus::ok;
            a.executed = state_from_json(require(e, "executed", ctx));
            a.planned_ref = sample_from_json(require(e, "planned_ref", ctx));
            if (e.contains("command")) {
                ControlCommand cmd;
                cmd.steer_target = num(e["command"], "steer_target", ctx);
                cmd.accel_target = num(e["command"], "accel_target", ctx);
                a.command = cmd;
            }
            if (e.contains("plan_snapshot"))
                for (const json& s : e["plan_snapshot"])
                    a.plan_snapshot.push_back(sample_from_json(s));
            record.agents.push_back(std::move(a));
        }
        log.steps.push_back(std::move(record));
    }
    return log;
}

void save_run_log(const RunLog& log, const std::filesystem::path& path) {
    write_text_file(path, to_json(log).dump() + "\n");
}

RunLog load_run_log(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return run_log_from_json(j);
}

namespace {

void append_num(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

}  // namespace

std::string run_log_csv(const RunLog& log) {
    std::string out =
        "step,t_s,agent_id,planned_x_m,planned_y_m,planned_heading_rad,planned_v_mps,"
        "executed_x_m,executed_y_m,executed_heading_rad,executed_v_mps,status\n";
    for (const StepRecord& record : log.steps) {
        for (const AgentStepRecord& a : record.agents) {
            out += std::to_string(record.step_index);
            out += ',';
            append_num(out, record.t);
            out += ',';
            out += std::to_string(a.agent_id);
            for (double v : {a.planned_ref.x, a.planned_ref.y, a.planned_ref.heading,
                             a.planned_ref.v, a.executed.x, a.executed.y, a.executed.heading,
                             a.executed.v}) {
                out += ',';
                append_num(out, v);
            }
            out += ',';
            out += to_string(a.status);
            out += '\n';
        }
    }
    return out;
}

void save_run_log_csv(const RunLog& log, const std::filesystem::path& path) {
    write_text_file(path, run_log_csv(log));
}

json to_json(const BatchReport& report) {
    json j;
    j["format_version"] = 1;
    json runs = json::array();
    for (const BatchRunRef& ref : report.runs) {
        json r;
        r["scenario_id"] = ref.scenario_id;
        r["backend"] = to_string(ref.backend);
        r["completed"] = ref.completed;
        r["wall_clock_seconds"] = ref.wall_clock_seconds;
        r["error"] = ref.error;
        r["log_path"] = ref.log_path;
        json term = json::object();
        for (const auto& [agent_id, t] : ref.termination)
            term[std::to_string(agent_id)] = {{"reason", to_string(t.reason)},
                                              {"step_index", t.step_index}};
        r["termination"] = std::move(term);
        runs.push_back(std::move(r));
    }
    j["runs"] = std::move(runs);
    json stats = json::object();
    for (const auto& [fidelity, s] : report.stats) {
        stats[to_string(fidelity)] = {{"min", s.min},         {"max", s.max},
                                      {"mean", s.mean},       {"median", s.median},
                                      {"std_dev", s.std_dev}, {"count", s.count},
                                      {"single_sample", s.single_sample}};
    }
    j["stats"] = std::move(stats);
    return j;
}

BatchReport batch_report_from_json(const json& j) {
    const std::string ctx = "batch report";
    BatchReport report;
    for (const json& r : require(j, "runs", ctx)) {
        BatchRunRef ref;
        ref.scenario_id = str(r, "scenario_id", ctx);
        ref.backend = fidelity_from_string(str(r, "backend", ctx), ctx);
        ref.completed = require(r, "completed", ctx).get<bool>();
        ref.wall_clock_seconds = num(r, "wall_clock_seconds", ctx);
        ref.error = str(r, "error", ctx);
        ref.log_path = str(r, "log_path", ctx);
        if (r.contains("termination"))
            for (const auto& [key, value] : r["termination"].items()) {
                AgentTermination t;
                t.reason = termination_from_string(str(value, "reason", ctx));
                t.step_index = integer(value, "step_index", ctx);
                ref.termination[std::stoi(key)] = t;
            }
        report.runs.push_back(std::move(ref));
    }
    for (const auto& [key, s] : require(j, "stats", ctx).items()) {
        TimingStats stats;
        stats.min = num(s, "min", ctx);
        stats.max = num(s, "max", ctx);
        stats.mean = num(s, "mean", ctx);
        stats.median = num(s, "median", ctx);
        stats.std_dev = num(s, "std_dev", ctx);
        stats.count = integer(s, "count", ctx);
        stats.single_sample = require(s, "single_sample", ctx).get<bool>();
        report.stats[fidelity_from_string(key, ctx)] = stats;
    }
    return report;
}

void save_batch_report(const BatchReport& report, const std::filesystem::path& path) {
    write_text_file(path, to_json(report).dump(2) + "\n");
}

BatchReport load_batch_report(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return batch_report_from_json(j);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, hash);
    return buf;
}

}  // namespace mfsim
