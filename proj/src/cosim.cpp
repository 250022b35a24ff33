#include "mfsim/cosim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "mfsim/errors.hpp"
#include "mfsim/frenet.hpp"
#include "mfsim/reference_path.hpp"

namespace mfsim {

void validate(const RunConfig& config) {
    if (config.dt_plan < 0.0) throw ValidationError("RunConfig.dt_plan must be >= 0");
    if (config.max_steps < 0) throw ValidationError("RunConfig.max_steps must be >= 0");
    if (config.substeps < 1) throw ValidationError("RunConfig.substeps must be >= 1");
    if (config.snapshot_samples < 1)
        throw ValidationError("RunConfig.snapshot_samples must be >= 1");
    if (config.noise_accel_std < 0.0)
        throw ValidationError("RunConfig.noise_accel_std must be >= 0");
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::none: return "none";
        case Termination::goal_reached: return "goal_reached";
        case Termination::timeout: return "timeout";
        case Termination::off_road: return "off_road";
        case Termination::collision: return "collision";
        case Termination::dynamics_error: return "dynamics_error";
    }
    return "unknown";
}

const char* to_string(PlannerStatus s) {
    return s == PlannerStatus::ok ? "ok" : "fallback";
}

std::vector<Vec2> RunLog::executed_polyline(int agent_id) const {
    std::vector<Vec2> out;
    for (const StepRecord& record : steps)
        for (const AgentStepRecord& agent : record.agents)
            if (agent.agent_id == agent_id) out.push_back({agent.executed.x, agent.executed.y});
    return out;
}

namespace {

struct AgentRuntime {
    AgentSpec spec;
    VehicleParams params;
    const Lanelet* lanelet = nullptr;
    std::unique_ptr<ReferencePath> path;
    std::unique_ptr<TrajectoryPlanner> planner;
    std::unique_ptr<Backend> backend;
    VehicleState state;
    PlannedTrajectory prev_traj;
    // Previous cycle's selected polynomials; the replan stitches its
    // second-derivative initial conditions from them.
    QuinticPolynomial prev_lateral;
    QuarticPolynomial prev_longitudinal;
    double prev_s0 = 0.0;
    bool prev_launch = false;
    bool prev_valid = false;
    double max_horizon = 0.0;
    bool active = true;
};

TrajectorySample sample_from_state(const VehicleState& s, double curvature) {
    TrajectorySample out;
    out.t = s.t;
    out.x = s.x;
    out.y = s.y;
    out.heading = s.heading;
    out.v = s.v;
    out.a = s.a;
    out.curvature = curvature;
    return out;
}

}  // namespace

RunLog run_scenario(const Scenario& scenario, const RunConfig& config,
                    const VehicleCatalog& catalog) {
    const auto t_start = std::chrono::steady_clock::now();
    validate(config);
    scenario.validate();

    const double dt = config.dt_plan > 0.0 ? config.dt_plan : scenario.dt_plan;
    const int max_steps = config.max_steps > 0 ? config.max_steps : scenario.max_steps;
    if (!(dt > 0.0)) throw ValidationError("effective dt_plan must be > 0");
    if (max_steps <= 0) throw ValidationError("effective max_steps must be > 0");

    RunLog log;
    log.scenario_id = scenario.scenario_id;
    log.backend = config.backend;
    log.config = config;

    const std::vector<Lanelet> lanelets = scenario.build_lanelets();

    std::vector<AgentRuntime> agents;
    agents.reserve(scenario.agents.size());
    for (const AgentSpec& spec : scenario.agents) {
        AgentRuntime rt;
        rt.spec = spec;
        rt.params = catalog.lookup(spec.vehicle_model);
        rt.lanelet = &lanelets[spec.lanelet_index];
        rt.path = std::make_unique<ReferencePath>(rt.lanelet->centerline);
        PlannerConfig pc = spec.planner;
        pc.lane_width = rt.lanelet->lane_width;  // containment follows the actual lane
        rt.planner = std::make_unique<TrajectoryPlanner>(pc);
        rt.backend = make_backend(config.backend, rt.params, config.substeps,
                                  config.seed + static_cast<unsigned long long>(spec.agent_id),
                                  config.noise_accel_std);
        rt.state = place_agent(*rt.lanelet, spec);
        rt.max_horizon = *std::max_element(pc.horizons.begin(), pc.horizons.end());
        agents.push_back(std::move(rt));
    }
    std::sort(agents.begin(), agents.end(),
              [](const AgentRuntime& a, const AgentRuntime& b) {
                  return a.spec.agent_id < b.spec.agent_id;
              });
    for (const AgentRuntime& rt : agents)
        log.termination[rt.spec.agent_id] = {Termination::none, 0};

    auto finish = [&](RunLog& out) -> RunLog& {
        out.wall_clock_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return out;
    };

    auto any_active = [&] {
        return std::any_of(agents.begin(), agents.end(),
                           [](const AgentRuntime& a) { return a.active; });
    };

    auto terminate = [&](AgentRuntime& rt, Termination reason, int step) {
        rt.active = false;
        log.termination[rt.spec.agent_id] = {reason, step};
    };

    for (int k = 0; k <= max_steps && any_active(); ++k) {
        const double t_k = k * dt;
        StepRecord record;
        record.step_index = k;
        record.t = t_k;

        struct PendingEntry {
            AgentRuntime* rt = nullptr;
            bool executes = false;
            PlannerStatus status = PlannerStatus::ok;
            PlannedTrajectory traj;
        };
        std::vector<PendingEntry> pending;

        // Boundary terminations: goal, collision, timeout.
        for (AgentRuntime& rt : agents) {
            if (!rt.active) continue;
            const Vec2 pos{rt.state.x, rt.state.y};
            const bool speed_ok = config.goal_speed_threshold < 0.0 ||
                                  rt.state.v <= config.goal_speed_threshold;
            if (rt.spec.goal.contains(pos) && speed_ok)
                terminate(rt, Termination::goal_reached, k);
        }
        for (size_t i = 0; i < agents.size(); ++i) {
            if (!agents[i].active) continue;
            for (size_t j = i + 1; j < agents.size(); ++j) {
                if (!agents[j].active) continue;
                const VehicleState& a = agents[i].state;
                const VehicleState& b = agents[j].state;
                if (footprints_overlap({a.x, a.y}, a.heading, agents[i].params.length,
                                       agents[i].params.width, {b.x, b.y}, b.heading,
                                       agents[j].params.length, agents[j].params.width)) {
                    terminate(agents[i], Termination::collision, k);
                    terminate(agents[j], Termination::collision, k);
                }
            }
        }
        const bool timed_out = k == max_steps;
        if (timed_out)
            for (AgentRuntime& rt : agents)
                if (rt.active) terminate(rt, Termination::timeout, k);

        // Observations for this cycle: executed states at the step boundary.
        std::vector<ObservedAgent> observed;
        for (const AgentRuntime& rt : agents) {
            if (!rt.active) continue;
            observed.push_back({rt.spec.agent_id, rt.state, rt.params.length, rt.params.width});
        }

        // Planning (ascending agent_id; `agents` is sorted).
        for (AgentRuntime& rt : agents) {
            const bool had_entry_this_step =
                log.termination[rt.spec.agent_id].reason == Termination::none ||
                log.termination[rt.spec.agent_id].step_index == k;
            if (!had_entry_this_step) continue;

            PendingEntry entry;
            entry.rt = &rt;
            if (rt.active) {
                std::vector<ObservedAgent> others;
                for (const ObservedAgent& o : observed)
                    if (o.agent_id != rt.spec.agent_id) others.push_back(o);
                const auto obstacles = predict_obstacles(others, rt.max_horizon, dt);
                bool off_road = false;
                PlanResult result;
                try {
                    const double kappa_hint =
                        std::tan(rt.state.steer) / rt.params.wheelbase;
                    FrenetState fs = cartesian_to_frenet(
                        *rt.path, {rt.state.x, rt.state.y}, rt.state.heading, rt.state.v,
                        rt.state.a, 2.0 * rt.lanelet->lane_width, kappa_hint);
                    if (std::abs(fs.d) > rt.lanelet->lane_width) {
                        off_road = true;
                    } else {
                        // Pose and velocity are the executed feedback; the
                        // acceleration initial conditions are stitched from
                        // the previous cycle's plan. Estimated (lagged)
                        // accelerations in the polynomial initial conditions
                        // ring the replanning chain.
                        if (rt.prev_valid) {
                            fs.s_ddot = rt.prev_longitudinal.d2(dt);
                            if (rt.prev_launch) {
                                const double ds =
                                    rt.prev_longitudinal.value(dt) - rt.prev_s0;
                                const double sd = rt.prev_longitudinal.d1(dt);
                                fs.d_ddot = rt.prev_lateral.d2(ds) * sd * sd +
                                            rt.prev_lateral.d1(ds) * fs.s_ddot;
                            } else {
                                fs.d_ddot = rt.prev_lateral.d2(dt);
                            }
                        }
                        result = rt.planner->plan(*rt.path, fs, obstacles, dt);
                    }
                } catch (const ProjectionError&) {
                    off_road = true;
                }
                if (off_road) {
                    terminate(rt, Termination::off_road, k);
                } else if (result.ok) {
                    entry.executes = true;
                    entry.status = PlannerStatus::ok;
                    const CandidateTrajectory& chosen =
                        result.candidates[result.selected_index];
                    rt.prev_lateral = chosen.lateral;
                    rt.prev_longitudinal = chosen.longitudinal;
                    rt.prev_s0 = chosen.longitudinal.value(0.0);
                    rt.prev_launch = chosen.launch_mode;
                    rt.prev_valid = true;
                    entry.traj = std::move(result.trajectory);
                } else {
                    entry.executes = true;
                    entry.status = PlannerStatus::fallback;
                    rt.prev_valid = false;
                    entry.traj = emergency_brake_trajectory(rt.state, rt.params.a_brake_max,
                                                            rt.max_horizon, dt);
                }
            }
            pending.push_back(std::move(entry));
        }

        // Record entries for every agent active at this boundary.
        for (PendingEntry& entry : pending) {
            AgentRuntime& rt = *entry.rt;
            AgentStepRecord rec;
            rec.agent_id = rt.spec.agent_id;
            rec.status = entry.status;
            rec.executed = rt.state;
            if (k == 0 || rt.prev_traj.states.empty()) {
                const double curvature = std::tan(rt.state.steer) / rt.params.wheelbase;
                rec.planned_ref = sample_from_state(rt.state, curvature);
            } else {
                rec.planned_ref = rt.prev_traj.state_at(dt);
                rec.planned_ref.t = t_k;
            }
            if (entry.executes) {
                const size_t n = std::min<size_t>(config.snapshot_samples,
                                                  entry.traj.states.size());
                rec.plan_snapshot.assign(entry.traj.states.begin(),
                                         entry.traj.states.begin() + n);
            }
            record.agents.push_back(std::move(rec));
        }

        // Execution: one dt step for every agent that planned.
        for (PendingEntry& entry : pending) {
            if (!entry.executes) continue;
            AgentRuntime& rt = *entry.rt;
            try {
                VehicleState next = rt.backend->step(rt.state, entry.traj, dt);
                next.t = (k + 1) * dt;  // product form keeps timestamps exact
                rt.state = next;
            } catch (const DynamicsError& e) {
                log.completed = false;
                log.error = e.what();
                terminate(rt, Termination::dynamics_error, k);
                for (AgentRuntime& other : agents)
                    if (other.active) terminate(other, Termination::dynamics_error, k);
                log.steps.push_back(std::move(record));
                return finish(log);
            }
            if (auto cmd = rt.backend->last_command()) {
                for (AgentStepRecord& rec : record.agents)
                    if (rec.agent_id == rt.spec.agent_id) rec.command = cmd;
            }
            rt.prev_traj = std::move(entry.traj);
        }

        log.steps.push_back(std::move(record));
    }

    return finish(log);
}

TimingStats timing_stats(std::vector<double> seconds) {
    if (seconds.empty()) throw StatsError("timing stats over an empty sample set");
    std::sort(seconds.begin(), seconds.end());
    TimingStats stats;
    stats.count = static_cast<int>(seconds.size());
    stats.min = seconds.front();
    stats.max = seconds.back();
    double sum = 0.0;
    for (double v : seconds) sum += v;
    stats.mean = sum / stats.count;
    const size_t n = seconds.size();
    stats.median = n % 2 == 1 ? seconds[n / 2]
                              : 0.5 * (seconds[n / 2 - 1] + seconds[n / 2]);
    if (n == 1) {
        stats.std_dev = 0.0;
        stats.single_sample = true;
    } else {
        double acc = 0.0;
        for (double v : seconds) acc += (v - stats.mean) * (v - stats.mean);
        stats.std_dev = std::sqrt(acc / (n - 1));
    }
    return stats;
}

BatchResult run_batch(const std::vector<Scenario>& scenarios,
                      const std::vector<RunConfig>& configs, int workers,
                      const VehicleCatalog& catalog) {
    if (scenarios.empty()) throw ValidationError("run_batch: empty scenario list");
    if (configs.empty()) throw ValidationError("run_batch: empty config list");

    struct Job {
        const Scenario* scenario;
        const RunConfig* config;
    };
    std::vector<Job> jobs;
    for (const Scenario& s : scenarios)
        for (const RunConfig& c : configs) jobs.push_back({&s, &c});
    std::stable_sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
        if (a.scenario->scenario_id != b.scenario->scenario_id)
            return a.scenario->scenario_id < b.scenario->scenario_id;
        return static_cast<int>(a.config->backend) < static_cast<int>(b.config->backend);
    });

    std::vector<RunLog> logs(jobs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                logs[i] = run_scenario(*jobs[i].scenario, *jobs[i].config, catalog);
            } catch (const Error& e) {
                RunLog failed;
                failed.scenario_id = jobs[i].scenario->scenario_id;
                failed.backend = jobs[i].config->backend;
                failed.config = *jobs[i].config;
                failed.completed = false;
                failed.error = e.what();
                logs[i] = std::move(failed);
            }
        }
    };
    const int thread_count = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (int i = 0; i < thread_count; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    BatchResult result;
    std::map<Fidelity, std::vector<double>> clocks;
    for (RunLog& log : logs) {
        BatchRunRef ref;
        ref.scenario_id = log.scenario_id;
        ref.backend = log.backend;
        ref.completed = log.completed;
        ref.wall_clock_seconds = log.wall_clock_seconds;
        ref.termination = log.termination;
        ref.error = log.error;
        if (log.completed) clocks[log.backend].push_back(log.wall_clock_seconds);
        result.report.runs.push_back(std::move(ref));
    }
    for (auto& [fidelity, values] : clocks)
        result.report.stats[fidelity] = timing_stats(values);
    result.logs = std::move(logs);
    return result;
}

ParityReport check_instantiation_parity(const Scenario& scenario,
                                        const VehicleCatalog& catalog) {
    scenario.validate();
    ParityReport report;
    report.scenario_id = scenario.scenario_id;
    // Both backends share the placement path; instantiate twice through
    // independently compiled lanelets to guard against placement drift.
    const std::vector<Lanelet> lanelets_low = scenario.build_lanelets();
    const std::vector<Lanelet> lanelets_high = scenario.build_lanelets();
    for (const AgentSpec& agent : scenario.agents) {
        catalog.lookup(agent.vehicle_model);
        const VehicleState low = place_agent(lanelets_low[agent.lanelet_index], agent);
        const VehicleState high = place_agent(lanelets_high[agent.lanelet_index], agent);
        AgentParity parity;
        parity.agent_id = agent.agent_id;
        parity.position_delta = (Vec2{low.x, low.y} - Vec2{high.x, high.y}).norm();
        parity.heading_delta = std::abs(angle_diff(low.heading, high.heading));
        report.max_position_delta = std::max(report.max_position_delta, parity.position_delta);
        report.max_heading_delta = std::max(report.max_heading_delta, parity.heading_delta);
        report.agents.push_back(parity);
    }
    return report;
}

}  // namespace mfsim
