#pragma once

#include <span>
#include <string>
#include <vector>

#include "mfsim/frenet.hpp"
#include "mfsim/polynomial.hpp"
#include "mfsim/vehicle.hpp"

namespace mfsim {

struct PlannerConfig {
    double target_speed = 10.0;  // m/s
    std::vector<double> lateral_offsets = {-1.0, -0.5, 0.0, 0.5, 1.0};  // m
    std::vector<double> horizons = {2.0, 3.0, 4.0};                     // s
    double k_jerk = 0.1;
    double k_time = 1.0;
    double k_lat_dev = 4.0;
    double k_speed_dev = 0.5;
    double v_max = 50.8;     // m/s
    double a_max = 8.0;      // m/s^2
    double kappa_max = 0.0;  // 1/m; 0 => derive from the assumed vehicle model
    // Containment inputs; the footprint is the planner's *assumed* model,
    // independent of the vehicle the high-fidelity backend simulates.
    double lane_width = 3.5;
    double vehicle_length = 4.6;
    double vehicle_width = 1.8;
    double launch_speed_threshold = 0.5;  // m/s

    /// Defaults with kappa_max = tan(delta_max)/wheelbase of the touring entry.
    static PlannerConfig defaults();

    bool operator==(const PlannerConfig&) const = default;
};

void validate(const PlannerConfig& config);

struct TrajectorySample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;  // wrapped to (-pi, pi]
    double v = 0.0;
    double a = 0.0;
    double curvature = 0.0;

    Vec2 position() const { return {x, y}; }
    bool operator==(const TrajectorySample&) const = default;
};

/// Time-parameterized planner output, sampled at dt_plan from t=0 to the
/// candidate horizon. The first state equals the planning initial state.
struct PlannedTrajectory {
    std::vector<TrajectorySample> states;

    double horizon() const { return states.empty() ? 0.0 : states.back().t; }
    /// Linear interpolation between samples (wrap-aware for heading).
    TrajectorySample state_at(double t) const;
    double arclength() const;
};

enum class RejectReason {
    none,
    speed_limit,
    accel_limit,
    curvature_limit,
    lane_departure,
    collision,
    reverse_motion,
    folding,
};

const char* to_string(RejectReason reason);

struct CandidateTrajectory {
    QuinticPolynomial lateral;       // time domain; arclength domain in launch mode
    QuarticPolynomial longitudinal;  // time domain
    double horizon_T = 0.0;
    double terminal_offset = 0.0;
    bool launch_mode = false;
    double cost = 0.0;
    bool feasible = true;
    RejectReason reject = RejectReason::none;
    int index = 0;  // enumeration order: offsets outer, horizons inner
};

/// Straight-line constant-velocity prediction of another agent.
struct PredictedTrajectory {
    int agent_id = 0;
    std::vector<TrajectorySample> states;
    double length = 4.6;  // footprint, m
    double width = 1.8;
};

struct ObservedAgent {
    int agent_id = 0;
    VehicleState state;
    double length = 4.6;
    double width = 1.8;
};

/// Constant-velocity, heading-hold predictions over `horizon`, sampled at dt.
std::vector<PredictedTrajectory> predict_obstacles(std::span<const ObservedAgent> agents,
                                                   double horizon, double dt);

struct PlanResult {
    bool ok = false;  // false => FallbackRequired
    PlannedTrajectory trajectory;
    int selected_index = -1;
    bool launch_mode = false;
    std::vector<CandidateTrajectory> candidates;
};

/// Three-circle footprint cover used for collision checks; centers sit at
/// {-L/3, 0, +L/3} along the heading from the footprint reference point.
std::array<Vec2, 3> footprint_circles(const Vec2& position, double heading, double length);
double footprint_circle_radius(double length, double width);
bool footprints_overlap(const Vec2& pos_a, double heading_a, double len_a, double wid_a,
                        const Vec2& pos_b, double heading_b, double len_b, double wid_b);

/// Frenet sampling planner: enumerates lateral-offset x horizon candidates,
/// filters on dynamic limits, lane containment and predicted collisions, and
/// returns the cheapest feasible candidate. Below the launch threshold the
/// lateral motion is planned over arclength instead of time, steering toward
/// the centerline. Stateless apart from the launch-mode flag.
class TrajectoryPlanner {
public:
    explicit TrajectoryPlanner(PlannerConfig config);

    PlanResult plan(const ReferencePath& path, const FrenetState& initial,
                    std::span<const PredictedTrajectory> obstacles, double dt_plan) const;

    bool last_launch_mode() const { return launch_mode_; }
    const PlannerConfig& config() const { return config_; }

private:
    PlannerConfig config_;
    mutable bool launch_mode_ = false;
};

/// Straight-line deceleration at `decel` to standstill along the current
/// heading; used when no feasible candidate exists.
PlannedTrajectory emergency_brake_trajectory(const VehicleState& state, double decel,
                                             double horizon, double dt_plan);

}  // namespace mfsim
