#include <cmath>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "mfsim/cosim.hpp"
#include "mfsim/errors.hpp"
#include "mfsim/serialization.hpp"

using namespace mfsim;

namespace {

Scenario straight_scenario() {
    GridSpec grid;
    grid.radii = {10.0};
    grid.angles_deg = {0.0};
    return generate_grid(grid, default_template())[0];
}

Scenario turn_scenario(double radius, double angle_deg) {
    GridSpec grid;
    grid.radii = {radius};
    grid.angles_deg = {angle_deg};
    return generate_grid(grid, default_template())[0];
}

RunConfig low_config() {
    RunConfig config;
    config.backend = Fidelity::low;
    return config;
}

RunConfig high_config() {
    RunConfig config;
    config.backend = Fidelity::high;
    return config;
}

double max_planned_vs_executed(const RunLog& log) {
    double worst = 0.0;
    for (const StepRecord& record : log.steps)
        for (const AgentStepRecord& a : record.agents) {
            const double err =
                (Vec2{a.executed.x, a.executed.y} - a.planned_ref.position()).norm();
            worst = std::max(worst, err);
        }
    return worst;
}

}  // namespace

TEST_CASE("low backend: straight run reaches the goal with zero execution error") {
    const RunLog log = run_scenario(straight_scenario(), low_config());
    CHECK(log.completed);
    REQUIRE(log.termination.count(0) == 1);
    CHECK(log.termination.at(0).reason == Termination::goal_reached);
    CHECK(max_planned_vs_executed(log) == 0.0);
}

TEST_CASE("high backend: straight run reaches the goal with small bounded error") {
    const RunLog log = run_scenario(straight_scenario(), high_config());
    CHECK(log.completed);
    CHECK(log.termination.at(0).reason == Termination::goal_reached);
    const double worst = max_planned_vs_executed(log);
    CHECK(worst > 0.0);
    CHECK(worst < 0.5);
}

TEST_CASE("step records carry exact product-form timestamps") {
    const RunLog log = run_scenario(turn_scenario(20.0, 60.0), low_config());
    for (const StepRecord& record : log.steps) {
        CHECK(record.t == record.step_index * 0.1);  // bitwise
        for (const AgentStepRecord& a : record.agents)
            CHECK(a.executed.t == record.t);
    }
    // contiguous step indices
    for (size_t i = 0; i < log.steps.size(); ++i)
        CHECK(log.steps[i].step_index == static_cast<int>(i));
}

TEST_CASE("same-timestamps invariant across fidelities") {
    const Scenario scenario = turn_scenario(20.0, 90.0);
    const RunLog low = run_scenario(scenario, low_config());
    const RunLog high = run_scenario(scenario, high_config());
    const size_t common = std::min(low.steps.size(), high.steps.size());
    for (size_t i = 0; i < common; ++i) {
        CHECK(low.steps[i].t == high.steps[i].t);
        CHECK(low.steps[i].step_index == high.steps[i].step_index);
    }
}

TEST_CASE("synchronization: planning initial state equals previous executed state") {
    const RunLog log = run_scenario(straight_scenario(), high_config());
    // The first snapshot sample of each cycle's plan is the executed state
    // at the same record (plan-from-executed contract).
    for (const StepRecord& record : log.steps) {
        for (const AgentStepRecord& a : record.agents) {
            if (a.plan_snapshot.empty()) continue;
            const Vec2 plan0 = a.plan_snapshot.front().position();
            CHECK((plan0 - Vec2{a.executed.x, a.executed.y}).norm() < 1e-9);
            CHECK(std::abs(a.plan_snapshot.front().v - a.executed.v) < 1e-9);
        }
    }
}

TEST_CASE("determinism: identical runs produce identical logs except wall clock") {
    const Scenario scenario = turn_scenario(15.0, 90.0);
    for (const RunConfig& config : {low_config(), high_config()}) {
        RunLog a = run_scenario(scenario, config);
        RunLog b = run_scenario(scenario, config);
        a.wall_clock_seconds = b.wall_clock_seconds = 0.0;
        CHECK(to_json(a).dump() == to_json(b).dump());
    }
}

TEST_CASE("agent declaration order does not change the logs") {
    Scenario scenario = crossing_scenario();
    Scenario permuted = scenario;
    std::swap(permuted.agents[0], permuted.agents[1]);
    for (const RunConfig& config : {low_config(), high_config()}) {
        RunLog a = run_scenario(scenario, config);
        RunLog b = run_scenario(permuted, config);
        a.wall_clock_seconds = b.wall_clock_seconds = 0.0;
        CHECK(to_json(a).dump() == to_json(b).dump());
    }
}

TEST_CASE("two-agent crossing: both reach goals, records hold both agents") {
    const Scenario scenario = crossing_scenario();
    for (const RunConfig& config : {low_config(), high_config()}) {
        const RunLog log = run_scenario(scenario, config);
        CHECK(log.completed);
        CHECK(log.termination.at(0).reason == Termination::goal_reached);
        CHECK(log.termination.at(1).reason == Termination::goal_reached);
        // Until the first agent terminates, every record carries two entries.
        const int first_done =
            std::min(log.termination.at(0).step_index, log.termination.at(1).step_index);
        for (const StepRecord& record : log.steps) {
            if (record.step_index < first_done) {
                CHECK(record.agents.size() == 2);
            }
            for (size_t i = 1; i < record.agents.size(); ++i)
                CHECK(record.agents[i].agent_id > record.agents[i - 1].agent_id);
        }
    }
}

TEST_CASE("liveness: a blocked agent terminates by timeout within max_steps") {
    Scenario scenario = straight_scenario();
    // Unreachable goal far off the road forces a timeout.
    scenario.agents[0].goal.center = {0.0, 500.0};
    scenario.max_steps = 120;
    const RunLog log = run_scenario(scenario, low_config());
    CHECK(log.termination.at(0).reason == Termination::timeout);
    CHECK(log.steps.size() <= 121);
    CHECK(log.steps.back().step_index <= 120);
}

TEST_CASE("fallback: infeasible demand brakes cleanly and logs the fallback status") {
    // Sharp 5 m turn at 15 m/s target cannot be tracked; the planner runs out
    // of feasible candidates once the vehicle drifts outside the lane band.
    GridSpec grid;
    grid.radii = {5.0};
    grid.angles_deg = {120.0};
    ScenarioTemplate tmpl = default_template();
    tmpl.road.sample_step = 0.5;
    tmpl.agent.planner.target_speed = 15.0;
    Scenario scenario = generate_grid(grid, tmpl)[0];
    scenario.max_steps = 400;

    const RunLog log = run_scenario(scenario, high_config());
    CHECK(log.completed);
    bool has_fallback = false;
    for (const StepRecord& record : log.steps)
        for (const AgentStepRecord& a : record.agents)
            if (a.status == PlannerStatus::fallback) has_fallback = true;
    CHECK(has_fallback);
    const Termination reason = log.termination.at(0).reason;
    CHECK((reason == Termination::off_road || reason == Termination::timeout ||
           reason == Termination::goal_reached));
}

TEST_CASE("run_batch: deterministic ordering, stats per backend, worker independence") {
    GridSpec grid;
    grid.radii = {15.0, 30.0};
    grid.angles_deg = {0.0, 60.0};
    const auto scenarios = generate_grid(grid, default_template());
    REQUIRE(scenarios.size() == 3);  // zero-angle cells dedupe to one straight
    const std::vector<RunConfig> configs = {low_config(), high_config()};

    const BatchResult serial = run_batch(scenarios, configs, 1);
    const BatchResult parallel = run_batch(scenarios, configs, 8);
    REQUIRE(serial.report.runs.size() == scenarios.size() * 2);
    REQUIRE(parallel.report.runs.size() == serial.report.runs.size());

    for (size_t i = 0; i < serial.report.runs.size(); ++i) {
        CHECK(serial.report.runs[i].scenario_id == parallel.report.runs[i].scenario_id);
        CHECK(serial.report.runs[i].backend == parallel.report.runs[i].backend);
        RunLog a = serial.logs[i];
        RunLog b = parallel.logs[i];
        a.wall_clock_seconds = b.wall_clock_seconds = 0.0;
        CHECK(to_json(a).dump() == to_json(b).dump());
    }
    // sorted by scenario_id then backend
    for (size_t i = 1; i < serial.report.runs.size(); ++i) {
        const auto& prev = serial.report.runs[i - 1];
        const auto& cur = serial.report.runs[i];
        const bool ordered = prev.scenario_id < cur.scenario_id ||
                             (prev.scenario_id == cur.scenario_id &&
                              static_cast<int>(prev.backend) < static_cast<int>(cur.backend));
        CHECK(ordered);
    }
    CHECK(serial.report.stats.count(Fidelity::low) == 1);
    CHECK(serial.report.stats.count(Fidelity::high) == 1);
    CHECK(serial.report.stats.at(Fidelity::low).count == 3);

    CHECK_THROWS_AS(run_batch({}, configs, 1), ValidationError);
}

TEST_CASE("batch records individual failures and continues") {
    auto scenarios = generate_grid(GridSpec{{15.0}, {60.0}, true}, default_template());
    Scenario broken = scenarios[0];
    broken.scenario_id = "broken_model";
    broken.agents[0].vehicle_model = "hovercraft";
    scenarios.push_back(broken);
    const BatchResult result = run_batch(scenarios, {low_config()}, 2);
    REQUIRE(result.report.runs.size() == 2);
    int failed = 0;
    for (const BatchRunRef& run : result.report.runs)
        if (!run.completed) ++failed;
    CHECK(failed == 1);
    CHECK(result.report.stats.at(Fidelity::low).count == 1);
}

TEST_CASE("instantiation parity is exactly zero for every agent") {
    for (const Scenario& scenario :
         {straight_scenario(), turn_scenario(10.0, 120.0), crossing_scenario()}) {
        const ParityReport report = check_instantiation_parity(scenario);
        CHECK(report.max_position_delta == 0.0);
        CHECK(report.max_heading_delta == 0.0);
        CHECK(report.agents.size() == scenario.agents.size());
    }
}

TEST_CASE("timing stats honor the sample (n-1) convention") {
    const TimingStats stats = timing_stats({1.0, 2.0, 3.0});
    CHECK(stats.min == doctest::Approx(1.0));
    CHECK(stats.max == doctest::Approx(3.0));
    CHECK(stats.mean == doctest::Approx(2.0));
    CHECK(stats.median == doctest::Approx(2.0));
    CHECK(stats.std_dev == doctest::Approx(1.0));  // sample convention
    CHECK_FALSE(stats.single_sample);

    const TimingStats one = timing_stats({2.5});
    CHECK(one.std_dev == 0.0);
    CHECK(one.single_sample);

    CHECK_THROWS_AS(timing_stats({}), StatsError);
}

TEST_CASE("run log JSON and CSV round trips") {
    const RunLog log = run_scenario(straight_scenario(), high_config());
    const nlohmann::json j = to_json(log);
    const RunLog back = run_log_from_json(j);
    CHECK(to_json(back).dump() == j.dump());

    const std::string csv = run_log_csv(log);
    CHECK(csv.rfind("step,t_s,agent_id,planned_x_m", 0) == 0);
    // one line per agent record plus header
    size_t lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    size_t expected = 1;
    for (const StepRecord& record : log.steps) expected += record.agents.size();
    CHECK(lines == expected);
}
