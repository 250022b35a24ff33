#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mfsim/planner.hpp"
#include "mfsim/road.hpp"
#include "mfsim/vehicle.hpp"

namespace mfsim {

struct GoalRegion {
    Vec2 center;
    double radius = 7.0;  // m, > 0

    bool contains(const Vec2& p) const { return (p - center).norm() <= radius; }
    bool operator==(const GoalRegion&) const = default;
};

struct AgentSpec {
    int agent_id = 0;
    int lanelet_index = 0;
    double initial_s = 5.0;               // arclength on the lanelet centerline, m
    double initial_lateral_offset = 0.0;  // m, positive left of travel direction
    double initial_speed = 0.0;           // m/s; standing start by default
    std::string vehicle_model = "touring";
    GoalRegion goal;
    PlannerConfig planner = PlannerConfig::defaults();

    bool operator==(const AgentSpec&) const = default;
};

/// One road of a scenario: either the single-turn RoadSpec form or a free
/// segment chain, placed at an origin pose (identity by default).
struct PlacedRoad {
    std::optional<RoadSpec> turn;       // set => single-turn form
    std::vector<RoadSegment> segments;  // used when turn is absent
    double lane_width = 3.5;            // segments form only
    double sample_step = 0.5;           // segments form only
    Pose2 origin;

    static PlacedRoad from_spec(RoadSpec spec) {
        PlacedRoad road;
        road.turn = std::move(spec);
        return road;
    }

    Lanelet build() const;
    bool operator==(const PlacedRoad&) const = default;
};

struct Scenario {
    std::string scenario_id;
    std::vector<PlacedRoad> roads;
    std::vector<AgentSpec> agents;
    double dt_plan = 0.1;  // s
    int max_steps = 600;

    std::vector<Lanelet> build_lanelets() const;
    /// Validates spec fields plus the compiled-geometry invariants
    /// (agent arclengths in range, unique ids, goal size).
    void validate() const;

    bool operator==(const Scenario&) const = default;
};

/// Initial state on (or laterally offset from) the centerline at the agent's
/// arclength, heading tangent, speed = initial_speed.
/// Throws PlacementError when initial_s is outside the lanelet range.
VehicleState place_agent(const Lanelet& lanelet, const AgentSpec& agent);

/// Grid of turn geometries; angles are stored in degrees (file convention)
/// and converted when roads are compiled.
struct GridSpec {
    std::vector<double> radii;       // m
    std::vector<double> angles_deg;  // signed; 0 = straight
    bool dedupe_straight = true;

    bool operator==(const GridSpec&) const = default;
};

struct ScenarioTemplate {
    RoadSpec road;  // radius/turn_angle replaced per grid cell
    AgentSpec agent;
    double dt_plan = 0.1;
    int max_steps = 600;
};

/// One scenario per (radius, angle) pair, radii outer, angles inner.
/// With dedupe_straight, all zero-angle cells collapse to one "straight"
/// scenario; otherwise zero-angle cells are kept per radius. Scenario ids
/// encode radius and angle and are pairwise distinct and stable.
std::vector<Scenario> generate_grid(const GridSpec& grid, const ScenarioTemplate& tmpl);

/// 6 radii x {+-30,+-60,+-90,+-120} plus one straight = 49 scenarios.
GridSpec default_grid();
/// 6 radii x 13 angles (-120..120 step 20, zero kept per radius) = 78.
GridSpec paper_scale_grid();

ScenarioTemplate default_template();

/// Places the goal region on the centerline 5 m before its end with
/// radius 2 * lane_width.
GoalRegion default_goal(const Lanelet& lanelet);

/// S-curve single-agent study scenario (left turn, straight, right turn).
Scenario study_s_curve_scenario();
/// Two agents on perpendicular crossing straights, staggered arrivals.
Scenario crossing_scenario();

/// Round-trips through a versioned JSON document; angles are degrees in the
/// file and radians in memory. The loader rejects unknown format versions.
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

/// Parses radius/angle from a grid scenario id ("turn_r10_g+90", "straight").
/// Returns false for non-grid ids.
bool parse_grid_scenario_id(const std::string& id, double& radius, double& angle_deg);

std::string grid_scenario_id(std::optional<double> radius, double angle_deg,
                             bool dedupe_straight);

}  // namespace mfsim
