#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mfsim/cosim.hpp"
#include "mfsim/errors.hpp"
#include "mfsim/evaluation.hpp"
#include "mfsim/report.hpp"
#include "mfsim/scenario.hpp"
#include "mfsim/serialization.hpp"

namespace py = pybind11;
using namespace mfsim;

namespace {

std::vector<std::pair<double, double>> polyline_pairs(const std::vector<Vec2>& points) {
    std::vector<std::pair<double, double>> out;
    out.reserve(points.size());
    for (const Vec2& p : points) out.emplace_back(p.x, p.y);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-fidelity co-simulation core: scenario generation, Frenet "
              "sampling planner, low/high-fidelity backends, evaluation.";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<CatalogError>(m, "CatalogError", PyExc_KeyError);

    py::enum_<Fidelity>(m, "Fidelity")
        .value("LOW", Fidelity::low)
        .value("HIGH", Fidelity::high);

    py::enum_<Termination>(m, "Termination")
        .value("NONE", Termination::none)
        .value("GOAL_REACHED", Termination::goal_reached)
        .value("TIMEOUT", Termination::timeout)
        .value("OFF_ROAD", Termination::off_road)
        .value("COLLISION", Termination::collision)
        .value("DYNAMICS_ERROR", Termination::dynamics_error);

    py::class_<RoadSpec>(m, "RoadSpec")
        .def(py::init<>())
        .def_readwrite("entry_length", &RoadSpec::entry_length)
        .def_readwrite("radius", &RoadSpec::radius)
        .def_readwrite("turn_angle", &RoadSpec::turn_angle)
        .def_readwrite("exit_length", &RoadSpec::exit_length)
        .def_readwrite("lane_width", &RoadSpec::lane_width)
        .def_readwrite("sample_step", &RoadSpec::sample_step);

    py::class_<Lanelet>(m, "Lanelet")
        .def_property_readonly("length",
                               [](const Lanelet& l) { return l.centerline.length(); })
        .def_property_readonly("lane_width", [](const Lanelet& l) { return l.lane_width; })
        .def("centerline_xy",
             [](const Lanelet& l) {
                 std::vector<std::pair<double, double>> out;
                 for (const CenterlineSample& c : l.centerline.samples)
                     out.emplace_back(c.x, c.y);
                 return out;
             })
        .def("centerline_curvature",
             [](const Lanelet& l) {
                 std::vector<double> out;
                 for (const CenterlineSample& c : l.centerline.samples)
                     out.push_back(c.curvature);
                 return out;
             })
        .def("left_boundary_xy",
             [](const Lanelet& l) { return polyline_pairs(l.left_boundary); })
        .def("right_boundary_xy",
             [](const Lanelet& l) { return polyline_pairs(l.right_boundary); });

    py::class_<GoalRegion>(m, "GoalRegion")
        .def_property_readonly("center_x", [](const GoalRegion& g) { return g.center.x; })
        .def_property_readonly("center_y", [](const GoalRegion& g) { return g.center.y; })
        .def_readwrite("radius", &GoalRegion::radius);

    py::class_<AgentSpec>(m, "AgentSpec")
        .def(py::init<>())
        .def_readwrite("agent_id", &AgentSpec::agent_id)
        .def_readwrite("lanelet_index", &AgentSpec::lanelet_index)
        .def_readwrite("initial_s", &AgentSpec::initial_s)
        .def_readwrite("initial_lateral_offset", &AgentSpec::initial_lateral_offset)
        .def_readwrite("initial_speed", &AgentSpec::initial_speed)
        .def_readwrite("vehicle_model", &AgentSpec::vehicle_model)
        .def_readwrite("goal", &AgentSpec::goal);

    py::class_<Scenario>(m, "Scenario")
        .def_readwrite("scenario_id", &Scenario::scenario_id)
        .def_readwrite("agents", &Scenario::agents)
        .def_readwrite("dt_plan", &Scenario::dt_plan)
        .def_readwrite("max_steps", &Scenario::max_steps)
        .def("build_lanelets", &Scenario::build_lanelets)
        .def("validate", &Scenario::validate)
        .def("__eq__", [](const Scenario& a, const Scenario& b) { return a == b; });

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def_readwrite("radii", &GridSpec::radii)
        .def_readwrite("angles_deg", &GridSpec::angles_deg)
        .def_readwrite("dedupe_straight", &GridSpec::dedupe_straight);

    py::class_<VehicleState>(m, "VehicleState")
        .def(py::init<>())
        .def_readwrite("x", &VehicleState::x)
        .def_readwrite("y", &VehicleState::y)
        .def_readwrite("heading", &VehicleState::heading)
        .def_readwrite("v", &VehicleState::v)
        .def_readwrite("a", &VehicleState::a)
        .def_readwrite("steer", &VehicleState::steer)
        .def_readwrite("t", &VehicleState::t);

    py::class_<VehicleParams>(m, "VehicleParams")
        .def_readonly("model_id", &VehicleParams::model_id)
        .def_readonly("wheelbase", &VehicleParams::wheelbase)
        .def_readonly("length", &VehicleParams::length)
        .def_readonly("width", &VehicleParams::width)
        .def_readonly("delta_max", &VehicleParams::delta_max)
        .def_readonly("mu", &VehicleParams::mu)
        .def_readonly("v_max", &VehicleParams::v_max);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("backend", &RunConfig::backend)
        .def_readwrite("dt_plan", &RunConfig::dt_plan)
        .def_readwrite("substeps", &RunConfig::substeps)
        .def_readwrite("max_steps", &RunConfig::max_steps)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("noise_accel_std", &RunConfig::noise_accel_std)
        .def_readwrite("snapshot_samples", &RunConfig::snapshot_samples);

    py::class_<AgentTermination>(m, "AgentTermination")
        .def_readonly("reason", &AgentTermination::reason)
        .def_readonly("step_index", &AgentTermination::step_index);

    py::class_<RunLog>(m, "RunLog")
        .def_readonly("scenario_id", &RunLog::scenario_id)
        .def_readonly("backend", &RunLog::backend)
        .def_readonly("completed", &RunLog::completed)
        .def_readonly("error", &RunLog::error)
        .def_readonly("wall_clock_seconds", &RunLog::wall_clock_seconds)
        .def_readonly("termination", &RunLog::termination)
        .def_property_readonly("step_count",
                               [](const RunLog& log) { return log.steps.size(); })
        .def("executed_polyline",
             [](const RunLog& log, int agent_id) {
                 return polyline_pairs(log.executed_polyline(agent_id));
             })
        .def("max_planned_vs_executed_error", [](const RunLog& log) {
            double worst = 0.0;
            for (const StepRecord& record : log.steps)
                for (const AgentStepRecord& a : record.agents) {
                    const double err = (Vec2{a.executed.x, a.executed.y} -
                                        a.planned_ref.position())
                                           .norm();
                    worst = std::max(worst, err);
                }
            return worst;
        });

    py::class_<TimingStats>(m, "TimingStats")
        .def_readonly("min", &TimingStats::min)
        .def_readonly("max", &TimingStats::max)
        .def_readonly("mean", &TimingStats::mean)
        .def_readonly("median", &TimingStats::median)
        .def_readonly("std_dev", &TimingStats::std_dev)
        .def_readonly("count", &TimingStats::count)
        .def_readonly("single_sample", &TimingStats::single_sample);

    py::class_<BatchRunRef>(m, "BatchRunRef")
        .def_readonly("scenario_id", &BatchRunRef::scenario_id)
        .def_readonly("backend", &BatchRunRef::backend)
        .def_readonly("completed", &BatchRunRef::completed)
        .def_readonly("wall_clock_seconds", &BatchRunRef::wall_clock_seconds);

    py::class_<BatchReport>(m, "BatchReport")
        .def_readonly("runs", &BatchReport::runs)
        .def_readonly("stats", &BatchReport::stats);

    py::class_<BatchResult>(m, "BatchResult")
        .def_readonly("report", &BatchResult::report)
        .def_readonly("logs", &BatchResult::logs);

    py::class_<DisplacementSample>(m, "DisplacementSample")
        .def_readonly("s", &DisplacementSample::s)
        .def_readonly("d", &DisplacementSample::d);

    py::class_<ErrorMetrics>(m, "ErrorMetrics")
        .def_readonly("agent_id", &ErrorMetrics::agent_id)
        .def_readonly("aligned_count", &ErrorMetrics::aligned_count)
        .def_readonly("t", &ErrorMetrics::t)
        .def_readonly("lateral", &ErrorMetrics::lateral)
        .def_readonly("v_ref", &ErrorMetrics::v_ref)
        .def_readonly("v_cmp", &ErrorMetrics::v_cmp)
        .def_readonly("max_abs_d", &ErrorMetrics::max_abs_d)
        .def_readonly("mean_abs_d", &ErrorMetrics::mean_abs_d)
        .def_readonly("rmse_pos", &ErrorMetrics::rmse_pos)
        .def_readonly("rmse_v", &ErrorMetrics::rmse_v)
        .def_readonly("max_abs_orientation", &ErrorMetrics::max_abs_orientation);

    py::class_<ParityReport>(m, "ParityReport")
        .def_readonly("scenario_id", &ParityReport::scenario_id)
        .def_readonly("max_position_delta", &ParityReport::max_position_delta)
        .def_readonly("max_heading_delta", &ParityReport::max_heading_delta);

    m.def("build_turn_road", &build_turn_road, py::arg("spec"),
          "Compile a RoadSpec into a lanelet (entry straight, arc, exit straight).");
    m.def("default_grid", &default_grid);
    m.def("paper_scale_grid", &paper_scale_grid);
    m.def(
        "generate_grid",
        [](const GridSpec& grid) { return generate_grid(grid, default_template()); },
        py::arg("grid"), "Generate scenarios from a grid using the default template.");
    m.def("study_s_curve_scenario", &study_s_curve_scenario);
    m.def("crossing_scenario", &crossing_scenario);
    m.def("save_scenario", &save_scenario, py::arg("scenario"), py::arg("path"));
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("place_agent", &place_agent, py::arg("lanelet"), py::arg("agent"));
    m.def("vehicle_catalog", &vehicle_catalog, py::arg("model_id"),
          py::return_value_policy::copy);
    m.def("catalog_ids", [] { return VehicleCatalog::builtin().ids(); });

    m.def(
        "run_scenario",
        [](const Scenario& scenario, const RunConfig& config) {
            return run_scenario(scenario, config);
        },
        py::arg("scenario"), py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def(
        "run_batch",
        [](const std::vector<Scenario>& scenarios, const std::vector<RunConfig>& configs,
           int workers) { return run_batch(scenarios, configs, workers); },
        py::arg("scenarios"), py::arg("configs"), py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
    m.def("check_instantiation_parity",
          [](const Scenario& scenario) { return check_instantiation_parity(scenario); },
          py::arg("scenario"));

    m.def("compare_runs", &compare_runs, py::arg("reference"), py::arg("comparison"));
    m.def("compare_planned_vs_executed", &compare_planned_vs_executed, py::arg("log"));
    m.def(
        "lateral_displacement",
        [](const std::vector<std::pair<double, double>>& reference,
           const std::vector<std::pair<double, double>>& comparison) {
            std::vector<Vec2> ref, cmp;
            for (const auto& [x, y] : reference) ref.push_back({x, y});
            for (const auto& [x, y] : comparison) cmp.push_back({x, y});
            return lateral_displacement(ref, cmp);
        },
        py::arg("reference"), py::arg("comparison"));

    m.attr("__version__") = MFSIM_VERSION;
}
