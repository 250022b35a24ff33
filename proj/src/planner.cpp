#include "mfsim/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfsim/errors.hpp"

namespace mfsim {

PlannerConfig PlannerConfig::defaults() {
    PlannerConfig config;
    const VehicleParams& assumed = vehicle_catalog("touring");
    config.kappa_max = std::tan(assumed.delta_max) / assumed.wheelbase;
    config.vehicle_length = assumed.length;
    config.vehicle_width = assumed.width;
    return config;
}

void validate(const PlannerConfig& c) {
    if (c.lateral_offsets.empty()) throw ValidationError("PlannerConfig.lateral_offsets empty");
    if (c.horizons.empty()) throw ValidationError("PlannerConfig.horizons empty");
    for (double T : c.horizons)
        if (!(T > 0.0)) throw ValidationError("PlannerConfig.horizons must be > 0");
    if (c.k_jerk < 0 || c.k_time < 0 || c.k_lat_dev < 0 || c.k_speed_dev < 0)
        throw ValidationError("PlannerConfig cost weights must be >= 0");
    if (!(c.kappa_max > 0.0)) throw ValidationError("PlannerConfig.kappa_max must be > 0");
    if (!(c.v_max > 0.0) || !(c.a_max > 0.0))
        throw ValidationError("PlannerConfig.v_max and a_max must be > 0");
    if (!(c.target_speed >= 0.0)) throw ValidationError("PlannerConfig.target_speed must be >= 0");
    if (!(c.lane_width > 0.0)) throw ValidationError("PlannerConfig.lane_width must be > 0");
}

TrajectorySample PlannedTrajectory::state_at(double t) const {
    if (states.empty()) throw ContractError("state_at on an empty trajectory");
    if (t <= states.front().t) return states.front();
    if (t >= states.back().t) return states.back();
    size_t i = 1;
    while (i < states.size() && states[i].t < t) ++i;
    // Exact grid hits are returned bitwise; the low-fidelity identity
    // depends on it.
    if (std::abs(states[i].t - t) < 1e-12) return states[i];
    if (std::abs(states[i - 1].t - t) < 1e-12) return states[i - 1];
    const TrajectorySample& a = states[i - 1];
    const TrajectorySample& b = states[i];
    const double u = (t - a.t) / (b.t - a.t);
    TrajectorySample out;
    out.t = t;
    out.x = a.x + u * (b.x - a.x);
    out.y = a.y + u * (b.y - a.y);
    out.heading = wrap_angle(a.heading + u * angle_diff(b.heading, a.heading));
    out.v = a.v + u * (b.v - a.v);
    out.a = a.a + u * (b.a - a.a);
    out.curvature = a.curvature + u * (b.curvature - a.curvature);
    return out;
}

double PlannedTrajectory::arclength() const {
    double total = 0.0;
    for (size_t i = 1; i < states.size(); ++i)
        total += (states[i].position() - states[i - 1].position()).norm();
    return total;
}

const char* to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::none: return "none";
        case RejectReason::speed_limit: return "speed_limit";
        case RejectReason::accel_limit: return "accel_limit";
        case RejectReason::curvature_limit: return "curvature_limit";
        case RejectReason::lane_departure: return "lane_departure";
        case RejectReason::collision: return "collision";
        case RejectReason::reverse_motion: return "reverse_motion";
        case RejectReason::folding: return "folding";
    }
    return "unknown";
}

std::vector<PredictedTrajectory> predict_obstacles(std::span<const ObservedAgent> agents,
                                                   double horizon, double dt) {
    if (!(dt > 0.0)) throw ValidationError("predict_obstacles: dt must be > 0");
    const int n = std::max(1, static_cast<int>(std::lround(horizon / dt)));
    std::vector<PredictedTrajectory> out;
    out.reserve(agents.size());
    for (const ObservedAgent& agent : agents) {
        PredictedTrajectory pred;
        pred.agent_id = agent.agent_id;
        pred.length = agent.length;
        pred.width = agent.width;
        pred.states.reserve(n + 1);
        const Vec2 dir = heading_dir(agent.state.heading);
        for (int k = 0; k <= n; ++k) {
            const double t = k * dt;
            TrajectorySample sample;
            sample.t = t;
            sample.x = agent.state.x + agent.state.v * t * dir.x;
            sample.y = agent.state.y + agent.state.v * t * dir.y;
            sample.heading = agent.state.heading;
            sample.v = agent.state.v;
            pred.states.push_back(sample);
        }
        out.push_back(std::move(pred));
    }
    return out;
}

std::array<Vec2, 3> footprint_circles(const Vec2& position, double heading, double length) {
    const Vec2 dir = heading_dir(heading);
    const double off = length / 3.0;
    return {position - off * dir, position, position + off * dir};
}

double footprint_circle_radius(double length, double width) {
    return std::hypot(length / 6.0, width / 2.0);
}

bool footprints_overlap(const Vec2& pos_a, double heading_a, double len_a, double wid_a,
                        const Vec2& pos_b, double heading_b, double len_b, double wid_b) {
    const auto circles_a = footprint_circles(pos_a, heading_a, len_a);
    const auto circles_b = footprint_circles(pos_b, heading_b, len_b);
    const double reach = footprint_circle_radius(len_a, wid_a) +
                         footprint_circle_radius(len_b, wid_b);
    const double reach2 = reach * reach;
    for (const Vec2& ca : circles_a)
        for (const Vec2& cb : circles_b)
            if ((ca - cb).squared_norm() < reach2) return true;
    return false;
}

TrajectoryPlanner::TrajectoryPlanner(PlannerConfig config) : config_(std::move(config)) {
    validate(config_);
}

namespace {

struct CandidateEvaluation {
    std::vector<TrajectorySample> samples;
    RejectReason reject = RejectReason::none;
    double terminal_s_dot = 0.0;
};

void check_boundary(double residual, const char* what) {
    if (std::abs(residual) > 1e-9)
        throw Error(std::string("candidate boundary condition violated: ") + what);
}

}  // namespace

PlanResult TrajectoryPlanner::plan(const ReferencePath& path, const FrenetState& initial,
                                   std::span<const PredictedTrajectory> obstacles,
                                   double dt_plan) const {
    if (!(dt_plan > 0.0)) throw ValidationError("plan: dt_plan must be > 0");
    for (double v : {initial.s, initial.s_dot, initial.s_ddot, initial.d, initial.d_dot,
                     initial.d_ddot})
        if (!std::isfinite(v)) throw ValidationError("plan: non-finite FrenetState");
    if (initial.s < -1e-9 || initial.s > path.length() + 1e-9)
        throw ValidationError("plan: FrenetState.s outside the reference path range");

    const double kr0 = path.pose_at(clamp(initial.s, 0.0, path.length())).curvature;
    const double v0 = std::hypot(initial.s_dot * (1.0 - kr0 * initial.d), initial.d_dot);
    launch_mode_ = v0 < config_.launch_speed_threshold;

    const double lane_bound = config_.lane_width / 2.0 - config_.vehicle_width / 2.0;

    PlanResult result;
    result.launch_mode = launch_mode_;

    auto evaluate = [&](const CandidateTrajectory& cand, double s0,
                        double T_eff) -> CandidateEvaluation {
        CandidateEvaluation eval;
        const int n = std::max(1, static_cast<int>(std::lround(T_eff / dt_plan)));
        eval.samples.reserve(n + 1);
        for (int k = 0; k <= n; ++k) {
            const double t = k * dt_plan;
            FrenetState fs;
            fs.s = cand.longitudinal.value(t);
            fs.s_dot = cand.longitudinal.d1(t);
            fs.s_ddot = cand.longitudinal.d2(t);
            if (cand.launch_mode) {
                const double ds = fs.s - s0;
                fs.d = cand.lateral.value(ds);
                const double dp = cand.lateral.d1(ds);
                const double dpp = cand.lateral.d2(ds);
                fs.d_dot = dp * fs.s_dot;
                fs.d_ddot = dpp * fs.s_dot * fs.s_dot + dp * fs.s_ddot;
            } else {
                fs.d = cand.lateral.value(t);
                fs.d_dot = cand.lateral.d1(t);
                fs.d_ddot = cand.lateral.d2(t);
            }
            if (fs.s_dot < -1e-9) {
                eval.reject = RejectReason::reverse_motion;
                return eval;
            }
            CartesianState cart;
            try {
                cart = frenet_to_cartesian(path, fs);
            } catch (const GeometryError&) {
                eval.reject = RejectReason::folding;
                return eval;
            }
            if (cart.v > config_.v_max + 1e-9) {
                eval.reject = RejectReason::speed_limit;
                return eval;
            }
            if (std::abs(cart.a) > config_.a_max + 1e-9) {
                eval.reject = RejectReason::accel_limit;
                return eval;
            }
            if (std::abs(cart.curvature) > config_.kappa_max + 1e-9) {
                eval.reject = RejectReason::curvature_limit;
                return eval;
            }
            if (std::abs(fs.d) > lane_bound + 1e-9) {
                eval.reject = RejectReason::lane_departure;
                return eval;
            }
            TrajectorySample sample;
            sample.t = t;
            sample.x = cart.position.x;
            sample.y = cart.position.y;
            sample.heading = cart.heading;
            sample.v = cart.v;
            sample.a = cart.a;
            sample.curvature = cart.curvature;
            eval.samples.push_back(sample);
            if (k == n) eval.terminal_s_dot = fs.s_dot;
        }
        for (const PredictedTrajectory& obstacle : obstacles) {
            const size_t common = std::min(eval.samples.size(), obstacle.states.size());
            for (size_t k = 0; k < common; ++k) {
                const TrajectorySample& ego = eval.samples[k];
                const TrajectorySample& other = obstacle.states[k];
                if (footprints_overlap(ego.position(), ego.heading, config_.vehicle_length,
                                       config_.vehicle_width, other.position(), other.heading,
                                       obstacle.length, obstacle.width)) {
                    eval.reject = RejectReason::collision;
                    return eval;
                }
            }
        }
        return eval;
    };

    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<TrajectorySample> best_samples;
    int index = 0;

    auto consider = [&](CandidateTrajectory cand, double s0, double T_eff, double lat_jerk,
                        double lat_dev) {
        cand.index = index++;
        CandidateEvaluation eval = evaluate(cand, s0, T_eff);
        const double speed_dev = eval.reject == RejectReason::none
                                     ? eval.terminal_s_dot - config_.target_speed
                                     : cand.longitudinal.d1(T_eff) - config_.target_speed;
        cand.cost = config_.k_jerk * (lat_jerk + cand.longitudinal.jerk_squared_integral(T_eff)) +
                    config_.k_time * T_eff + config_.k_lat_dev * lat_dev +
                    config_.k_speed_dev * speed_dev * speed_dev;
        cand.feasible = eval.reject == RejectReason::none;
        cand.reject = eval.reject;
        if (cand.feasible && cand.cost < best_cost) {
            best_cost = cand.cost;
            result.selected_index = cand.index;
            best_samples = std::move(eval.samples);
        }
        result.candidates.push_back(std::move(cand));
    };

    if (launch_mode_) {
        // Arclength-domain lateral planning: t-parameterized lateral dynamics
        // degenerate near standstill, so the lateral offset relaxes to the
        // centerline over the distance covered by the longitudinal solution.
        const double dp0 = std::abs(initial.s_dot) > 1e-6 ? initial.d_dot / initial.s_dot : 0.0;
        for (double T : config_.horizons) {
            const int n = std::max(1, static_cast<int>(std::lround(T / dt_plan)));
            const double T_eff = n * dt_plan;
            CandidateTrajectory cand;
            cand.launch_mode = true;
            cand.horizon_T = T_eff;
            cand.terminal_offset = 0.0;
            cand.longitudinal = solve_quartic_velocity_keeping(
                initial.s, initial.s_dot, initial.s_ddot, config_.target_speed, T_eff);
            const double travel = cand.longitudinal.value(T_eff) - initial.s;
            if (travel > 1e-6) {
                cand.lateral = solve_quintic(initial.d, dp0, 0.0, 0.0, travel);
                check_boundary(cand.lateral.value(0.0) - initial.d, "launch lateral position");
                check_boundary(cand.lateral.value(travel), "launch terminal offset");
            } else {
                cand.lateral = QuinticPolynomial({initial.d, 0, 0, 0, 0, 0});
            }
            check_boundary(cand.longitudinal.value(0.0) - initial.s, "initial s");
            check_boundary(cand.longitudinal.d1(0.0) - initial.s_dot, "initial s_dot");
            check_boundary(cand.longitudinal.d1(T_eff) - config_.target_speed, "terminal s_dot");
            check_boundary(cand.longitudinal.d2(T_eff), "terminal s_ddot");
            consider(std::move(cand), initial.s, T_eff, 0.0, 0.0);
        }
    } else {
        for (double offset : config_.lateral_offsets) {
            for (double T : config_.horizons) {
                const int n = std::max(1, static_cast<int>(std::lround(T / dt_plan)));
                const double T_eff = n * dt_plan;
                CandidateTrajectory cand;
                cand.horizon_T = T_eff;
                cand.terminal_offset = offset;
                cand.lateral = solve_quintic(initial.d, initial.d_dot, initial.d_ddot, offset,
                                             T_eff);
                cand.longitudinal = solve_quartic_velocity_keeping(
                    initial.s, initial.s_dot, initial.s_ddot, config_.target_speed, T_eff);
                check_boundary(cand.lateral.value(0.0) - initial.d, "initial d");
                check_boundary(cand.lateral.d1(0.0) - initial.d_dot, "initial d_dot");
                check_boundary(cand.lateral.d2(0.0) - initial.d_ddot, "initial d_ddot");
                check_boundary(cand.lateral.value(T_eff) - offset, "terminal d");
                check_boundary(cand.lateral.d1(T_eff), "terminal d_dot");
                check_boundary(cand.lateral.d2(T_eff), "terminal d_ddot");
                check_boundary(cand.longitudinal.d1(T_eff) - config_.target_speed,
                               "terminal s_dot");
                check_boundary(cand.longitudinal.d2(T_eff), "terminal s_ddot");
                const double lat_jerk = cand.lateral.jerk_squared_integral(T_eff);
                consider(std::move(cand), initial.s, T_eff, lat_jerk, offset * offset);
            }
        }
    }

    if (result.selected_index >= 0) {
        result.ok = true;
        result.trajectory.states = std::move(best_samples);
    }
    return result;
}

PlannedTrajectory emergency_brake_trajectory(const VehicleState& state, double decel,
                                             double horizon, double dt_plan) {
    if (!(decel > 0.0)) throw ValidationError("emergency brake decel must be > 0");
    if (!(dt_plan > 0.0)) throw ValidationError("emergency brake dt_plan must be > 0");
    const int n = std::max(1, static_cast<int>(std::lround(horizon / dt_plan)));
    const double t_stop = state.v / decel;
    const Vec2 dir = heading_dir(state.heading);
    PlannedTrajectory traj;
    traj.states.reserve(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double t = k * dt_plan;
        TrajectorySample sample;
        sample.t = t;
        double dist;
        if (t < t_stop) {
            dist = state.v * t - 0.5 * decel * t * t;
            sample.v = state.v - decel * t;
            sample.a = -decel;
        } else {
            dist = 0.5 * state.v * t_stop;
            sample.v = 0.0;
            sample.a = 0.0;
        }
        sample.x = state.x + dist * dir.x;
        sample.y = state.y + dist * dir.y;
        sample.heading = state.heading;
        sample.curvature = 0.0;
        traj.states.push_back(sample);
    }
    return traj;
}

}  // namespace mfsim
