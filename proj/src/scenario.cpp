#include "mfsim/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "mfsim/errors.hpp"
#include "mfsim/reference_path.hpp"

namespace mfsim {

Lanelet PlacedRoad::build() const {
    if (turn) {
        validate(*turn);
        const std::vector<RoadSegment> segments = turn_road_segments(*turn);
        if (segments.empty()) throw ValidationError("road has zero total length");
        return build_segment_road(segments, origin, turn->lane_width, turn->sample_step);
    }
    return build_segment_road(segments, origin, lane_width, sample_step);
}

std::vector<Lanelet> Scenario::build_lanelets() const {
    std::vector<Lanelet> lanelets;
    lanelets.reserve(roads.size());
    for (const PlacedRoad& road : roads) lanelets.push_back(road.build());
    return lanelets;
}

void Scenario::validate() const {
    if (scenario_id.empty()) throw ValidationError("Scenario.scenario_id is empty");
    if (roads.empty()) throw ValidationError("Scenario needs >= 1 lanelet");
    if (agents.empty()) throw ValidationError("Scenario needs >= 1 agent");
    if (!(dt_plan > 0.0)) throw ValidationError("Scenario.dt_plan must be > 0");
    if (max_steps <= 0) throw ValidationError("Scenario.max_steps must be > 0");

    const std::vector<Lanelet> lanelets = build_lanelets();
    std::set<int> ids;
    for (const AgentSpec& agent : agents) {
        if (!ids.insert(agent.agent_id).second)
            throw ValidationError("duplicate agent_id " + std::to_string(agent.agent_id));
        if (agent.lanelet_index < 0 ||
            agent.lanelet_index >= static_cast<int>(lanelets.size()))
            throw ValidationError("agent " + std::to_string(agent.agent_id) +
                                  ": lanelet_index out of range");
        const Lanelet& lanelet = lanelets[agent.lanelet_index];
        if (agent.initial_s < 0.0 || agent.initial_s > lanelet.centerline.length())
            throw ValidationError("agent " + std::to_string(agent.agent_id) +
                                  ": initial_s outside the lanelet arclength range");
        if (!(agent.goal.radius > 0.0))
            throw ValidationError("agent " + std::to_string(agent.agent_id) +
                                  ": goal radius must be > 0");
        if (agent.goal.radius < lanelet.lane_width / 2.0)
            throw ValidationError("agent " + std::to_string(agent.agent_id) +
                                  ": goal radius must be >= lane_width/2");
        if (!(agent.initial_speed >= 0.0))
            throw ValidationError("agent " + std::to_string(agent.agent_id) +
                                  ": initial_speed must be >= 0");
        if (agent.vehicle_model.empty())
            throw ValidationError("agent " + std::to_string(agent.agent_id) +
                                  ": vehicle_model is empty");
        mfsim::validate(agent.planner);
    }
}

VehicleState place_agent(const Lanelet& lanelet, const AgentSpec& agent) {
    const double length = lanelet.centerline.length();
    if (agent.initial_s < 0.0 || agent.initial_s > length)
        throw PlacementError("initial_s " + std::to_string(agent.initial_s) +
                             " outside [0, " + std::to_string(length) + "]");
    const ReferencePath path(lanelet.centerline);
    const PathPose pose = path.pose_at(agent.initial_s);
    const Vec2 position = pose.position + agent.initial_lateral_offset * left_normal(pose.heading);
    VehicleState state;
    state.x = position.x;
    state.y = position.y;
    state.heading = wrap_angle(pose.heading);
    state.v = agent.initial_speed;
    state.t = 0.0;
    return state;
}

GoalRegion default_goal(const Lanelet& lanelet) {
    const ReferencePath path(lanelet.centerline);
    const double s_goal = std::max(0.0, path.length() - 5.0);
    GoalRegion goal;
    goal.center = path.pose_at(s_goal).position;
    goal.radius = 2.0 * lanelet.lane_width;
    return goal;
}

namespace {

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

std::string grid_scenario_id(std::optional<double> radius, double angle_deg,
                             bool dedupe_straight) {
    if (angle_deg == 0.0 && (dedupe_straight || !radius)) return "straight";
    std::string id = "turn_r" + fmt_num(radius.value_or(0.0)) + "_g";
    if (angle_deg >= 0.0) id += "+";
    id += fmt_num(angle_deg);
    return id;
}

bool parse_grid_scenario_id(const std::string& id, double& radius, double& angle_deg) {
    if (id == "straight") {
        radius = 0.0;
        angle_deg = 0.0;
        return true;
    }
    double r = 0.0, g = 0.0;
    if (std::sscanf(id.c_str(), "turn_r%lf_g%lf", &r, &g) == 2) {
        radius = r;
        angle_deg = g;
        return true;
    }
    return false;
}

std::vector<Scenario> generate_grid(const GridSpec& grid, const ScenarioTemplate& tmpl) {
    if (grid.radii.empty()) throw ValidationError("grid radii list is empty");
    if (grid.angles_deg.empty()) throw ValidationError("grid angles list is empty");
    for (double r : grid.radii)
        if (!(r > 0.0)) throw ValidationError("grid radii must be > 0");

    std::vector<Scenario> scenarios;
    std::set<std::string> seen;
    bool straight_emitted = false;
    for (double radius : grid.radii) {
        for (double angle_deg : grid.angles_deg) {
            const bool straight = angle_deg == 0.0;
            if (straight && grid.dedupe_straight) {
                if (straight_emitted) continue;
                straight_emitted = true;
            }
            RoadSpec road = tmpl.road;
            if (straight && grid.dedupe_straight) {
                road.radius.reset();
                road.turn_angle = 0.0;
            } else {
                road.radius = radius;
                road.turn_angle = deg_to_rad(angle_deg);
            }
            Scenario scenario;
            scenario.scenario_id =
                grid_scenario_id(road.radius, angle_deg, grid.dedupe_straight);
            scenario.roads.push_back(PlacedRoad::from_spec(road));
            scenario.dt_plan = tmpl.dt_plan;
            scenario.max_steps = tmpl.max_steps;
            AgentSpec agent = tmpl.agent;
            agent.goal = default_goal(scenario.roads.back().build());
            scenario.agents.push_back(std::move(agent));
            scenario.validate();
            if (!seen.insert(scenario.scenario_id).second)
                throw ValidationError("grid produced duplicate scenario_id '" +
                                      scenario.scenario_id + "'");
            scenarios.push_back(std::move(scenario));
        }
    }
    return scenarios;
}

GridSpec default_grid() {
    GridSpec grid;
    grid.radii = {10.0, 15.0, 20.0, 30.0, 50.0, 80.0};
    grid.angles_deg = {-120.0, -90.0, -60.0, -30.0, 0.0, 30.0, 60.0, 90.0, 120.0};
    grid.dedupe_straight = true;
    return grid;
}

GridSpec paper_scale_grid() {
    GridSpec grid;
    grid.radii = {10.0, 15.0, 20.0, 30.0, 50.0, 80.0};
    for (int deg = -120; deg <= 120; deg += 20) grid.angles_deg.push_back(deg);
    grid.dedupe_straight = false;
    return grid;
}

ScenarioTemplate default_template() {
    ScenarioTemplate tmpl;
    tmpl.road = RoadSpec{};  // 40 m straights, 3.5 m lane, 0.5 m sampling
    tmpl.agent.agent_id = 0;
    tmpl.agent.initial_s = 5.0;
    tmpl.agent.initial_speed = 0.0;
    tmpl.agent.vehicle_model = "touring";
    return tmpl;
}

Scenario study_s_curve_scenario() {
    Scenario scenario;
    scenario.scenario_id = "study_s_curve";
    // Entry long enough for every catalog model to settle at cruise speed;
    // the 11 m arcs demand ~9.1 m/s^2 at cruise, between the city car's and
    // the touring car's friction limits.
    PlacedRoad road;
    road.segments = {RoadSegment::make_straight(70.0),
                     RoadSegment::make_arc(11.0, deg_to_rad(80.0)),
                     RoadSegment::make_straight(10.0),
                     RoadSegment::make_arc(11.0, deg_to_rad(-80.0)),
                     RoadSegment::make_straight(35.0)};
    road.lane_width = 5.0;
    scenario.roads.push_back(road);
    AgentSpec agent = default_template().agent;
    agent.goal = default_goal(scenario.roads.back().build());
    scenario.agents.push_back(std::move(agent));
    scenario.validate();
    return scenario;
}

Scenario crossing_scenario() {
    Scenario scenario;
    scenario.scenario_id = "crossing_two_agent";

    PlacedRoad east;
    east.segments = {RoadSegment::make_straight(120.0)};
    east.origin = {-60.0, 0.0, 0.0};
    scenario.roads.push_back(east);

    PlacedRoad north;
    north.segments = {RoadSegment::make_straight(120.0)};
    north.origin = {0.0, -95.0, deg_to_rad(90.0)};
    scenario.roads.push_back(north);

    AgentSpec first = default_template().agent;
    first.agent_id = 0;
    first.lanelet_index = 0;
    first.goal = default_goal(scenario.roads[0].build());
    scenario.agents.push_back(first);

    AgentSpec second = default_template().agent;
    second.agent_id = 1;
    second.lanelet_index = 1;
    second.goal = default_goal(scenario.roads[1].build());
    scenario.agents.push_back(second);

    scenario.validate();
    return scenario;
}

}  // namespace mfsim
