#pragma once

#include <map>
#include <string>
#include <vector>

namespace mfsim {

/// Executed vehicle state. Position is the footprint reference point,
/// heading is wrapped to (-pi, pi], v >= 0 (reverse not modeled).
struct VehicleState {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
    double v = 0.0;      // m/s
    double a = 0.0;      // m/s^2
    double steer = 0.0;  // current front-wheel angle, rad
    double t = 0.0;      // s

    bool operator==(const VehicleState&) const = default;
};

struct VehicleParams {
    std::string model_id;
    double wheelbase = 2.7;        // m
    double length = 4.6;           // m
    double width = 1.8;            // m
    double mass = 1500.0;          // kg, informational
    double delta_max = 0.61;       // rad
    double steer_rate_max = 6.98;  // rad/s
    double a_accel_max = 8.0;      // m/s^2
    double a_brake_max = 10.0;     // m/s^2
    double v_max = 50.8;           // m/s
    double tau_steer = 0.08;       // s, steering actuator lag
    double tau_accel = 0.25;       // s, drivetrain lag
    double mu = 1.0;               // friction coefficient

    bool operator==(const VehicleParams&) const = default;
};

void validate(const VehicleParams& params);

struct ControlCommand {
    double steer_target = 0.0;  // rad, clamped to +-delta_max
    double accel_target = 0.0;  // m/s^2, clamped to [-a_brake_max, a_accel_max]

    bool operator==(const ControlCommand&) const = default;
};

/// Fixed archetype catalog: a touring car (the model the planner assumes),
/// an off-road vehicle and a small city car.
class VehicleCatalog {
public:
    static const VehicleCatalog& builtin();

    VehicleCatalog() = default;
    explicit VehicleCatalog(std::map<std::string, VehicleParams> entries)
        : entries_(std::move(entries)) {}

    /// Throws CatalogError listing the valid ids.
    const VehicleParams& lookup(const std::string& model_id) const;

    std::vector<std::string> ids() const;
    const std::map<std::string, VehicleParams>& entries() const { return entries_; }

    void set(const VehicleParams& params) { entries_[params.model_id] = params; }

private:
    std::map<std::string, VehicleParams> entries_;
};

/// Catalog lookup against the builtin entries.
const VehicleParams& vehicle_catalog(const std::string& model_id);

}  // namespace mfsim
