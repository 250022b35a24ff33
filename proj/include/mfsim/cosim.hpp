#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mfsim/backend.hpp"
#include "mfsim/scenario.hpp"

namespace mfsim {

struct RunConfig {
    Fidelity backend = Fidelity::low;
    double dt_plan = 0.1;  // s
    int substeps = 10;     // high-fidelity integration substeps per cycle
    int max_steps = 0;     // 0 => take the scenario's max_steps
    double goal_speed_threshold = -1.0;  // m/s; negative disables the speed gate
    unsigned long long seed = 0;         // reserved for the optional noise term
    double noise_accel_std = 0.0;        // m/s^2; 0 disables
    int snapshot_samples = 5;            // planned-trajectory samples kept per record

    bool operator==(const RunConfig&) const = default;
};

void validate(const RunConfig& config);

enum class Termination { none, goal_reached, timeout, off_road, collision, dynamics_error };
enum class PlannerStatus { ok, fallback };

const char* to_string(Termination t);
const char* to_string(PlannerStatus s);

struct AgentStepRecord {
    int agent_id = 0;
    PlannerStatus status = PlannerStatus::ok;
    /// State at this record's timestamp.
    VehicleState executed;
    /// The state planned *for* this timestamp by the previous cycle
    /// (equals `executed` for the initial record and for low fidelity).
    TrajectorySample planned_ref;
    /// First substep command of this cycle (high fidelity only).
    std::optional<ControlCommand> command;
    /// First snapshot_samples states of the trajectory planned this cycle;
    /// empty for terminal records.
    std::vector<TrajectorySample> plan_snapshot;
};

struct StepRecord {
    int step_index = 0;
    double t = 0.0;  // = step_index * dt_plan exactly
    std::vector<AgentStepRecord> agents;
};

struct AgentTermination {
    Termination reason = Termination::none;
    int step_index = 0;
};

struct RunLog {
    std::string scenario_id;
    Fidelity backend = Fidelity::low;
    RunConfig config;
    std::vector<StepRecord> steps;
    std::map<int, AgentTermination> termination;  // one entry per agent
    double wall_clock_seconds = 0.0;
    bool completed = true;  // false on dynamics abort
    std::string error;

    /// Executed positions of one agent in record order.
    std::vector<Vec2> executed_polyline(int agent_id) const;
};

/// Synchronized per-cycle loop: every active agent plans from its executed
/// state (observing the others' states from the previous step boundary,
/// ascending agent_id), then all execute exactly one dt_plan step through the
/// configured backend; executed states become the next initial conditions.
/// Planner fallback switches the agent to an emergency-brake trajectory and
/// the run continues; a dynamics error aborts with a partial log.
RunLog run_scenario(const Scenario& scenario, const RunConfig& config,
                    const VehicleCatalog& catalog = VehicleCatalog::builtin());

struct TimingStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double median = 0.0;
    double std_dev = 0.0;  // sample (n-1) convention
    int count = 0;
    bool single_sample = false;
};

TimingStats timing_stats(std::vector<double> seconds);

struct BatchRunRef {
    std::string scenario_id;
    Fidelity backend = Fidelity::low;
    bool completed = true;
    double wall_clock_seconds = 0.0;
    std::map<int, AgentTermination> termination;
    std::string error;
    std::string log_path;  // empty when logs are kept in memory only
};

struct BatchReport {
    std::vector<BatchRunRef> runs;  // sorted by scenario_id, then backend
    std::map<Fidelity, TimingStats> stats;  // over completed runs only
};

struct BatchResult {
    BatchReport report;
    std::vector<RunLog> logs;  // parallel to report.runs
};

/// Runs every scenario x config pair, optionally on worker threads.
/// Ordering of the report is deterministic regardless of completion order;
/// individual failures are recorded and the batch continues.
BatchResult run_batch(const std::vector<Scenario>& scenarios,
                      const std::vector<RunConfig>& configs, int workers = 1,
                      const VehicleCatalog& catalog = VehicleCatalog::builtin());

struct AgentParity {
    int agent_id = 0;
    double position_delta = 0.0;
    double heading_delta = 0.0;
};

struct ParityReport {
    std::string scenario_id;
    std::vector<AgentParity> agents;
    double max_position_delta = 0.0;
    double max_heading_delta = 0.0;
};

/// Instantiates every agent in both backends and reports the initial pose
/// difference (exactly zero by construction; guards placement drift).
ParityReport check_instantiation_parity(const Scenario& scenario,
                                        const VehicleCatalog& catalog =
                                            VehicleCatalog::builtin());

}  // namespace mfsim
