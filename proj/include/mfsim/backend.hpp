#pragma once

#include <memory>
#include <optional>
#include <random>

#include "mfsim/planner.hpp"
#include "mfsim/vehicle.hpp"

namespace mfsim {

enum class Fidelity { low, high };

const char* to_string(Fidelity fidelity);

/// Controller parameters shared by all vehicles: the controller is fitted
/// once, deliberately not re-tuned per model.
struct ControllerGains {
    double k_p = 1.5;                  // speed proportional gain, 1/s
    double k_i = 0.3;                  // speed integral gain, 1/s^2
    double integral_accel_clamp = 2.0; // anti-windup bound on K_i * integral, m/s^2
    double k_lookahead = 0.40;         // s, lookahead = k_lookahead * v
    double lookahead_min = 2.0;        // m
    double lookahead_max = 12.0;       // m

    bool operator==(const ControllerGains&) const = default;
};

/// Pure-pursuit steering toward the trajectory point one lookahead arc
/// distance ahead of the closest trajectory point. Clamped to +-delta_max.
double pure_pursuit_lateral(const VehicleState& state, const PlannedTrajectory& traj,
                            const VehicleParams& params, const ControllerGains& gains);

/// PI speed tracking with planned-acceleration feed-forward at the matched
/// trajectory time. The integral argument accumulates after the output is
/// formed and is anti-windup clamped.
double pi_longitudinal(const VehicleState& state, const PlannedTrajectory& traj,
                       const VehicleParams& params, const ControllerGains& gains,
                       double traj_time, double dt, double& integral);

/// State enforcement: returns the trajectory state at t = dt_plan.
/// Throws ContractError when the trajectory does not start at `state`
/// (1e-9 position tolerance) or does not cover dt_plan.
VehicleState lofi_step(const VehicleState& state, const PlannedTrajectory& traj,
                       const VehicleParams& params, double dt_plan);

/// Controlled kinematic-bicycle execution: per substep, controller commands,
/// first-order actuator lags (rate-limited steering), friction-circle
/// steering saturation, then a semi-implicit bicycle update.
/// `accel_state` is the drivetrain-lag internal state; the returned
/// VehicleState.a reports the realized dv/dt over the step (feeding the
/// lagged actuator value back into replanning rings the velocity chain).
/// Throws DynamicsError if the state turns non-finite.
VehicleState hifi_step(const VehicleState& state, const PlannedTrajectory& traj,
                       const VehicleParams& params, double dt_plan, int substeps,
                       const ControllerGains& gains, double& pi_integral,
                       double& accel_state, ControlCommand* first_command = nullptr,
                       std::mt19937_64* noise_rng = nullptr, double noise_accel_std = 0.0);

/// Effective steering under the friction circle: demanded lateral
/// acceleration v^2 tan|steer| / wheelbase is capped at mu*g.
double saturate_steering(double steer, double v, const VehicleParams& params);

/// One saturation + semi-implicit kinematic bicycle substep using the
/// state's current steer and acceleration (actuators untouched).
VehicleState integrate_bicycle(const VehicleState& state, double dt,
                               const VehicleParams& params);

/// Per-agent execution backend. One instance per agent per run; the
/// high-fidelity backend holds mutable controller state (PI integral).
class Backend {
public:
    virtual ~Backend() = default;

    /// Advances exactly dt_plan; deterministic.
    virtual VehicleState step(const VehicleState& state, const PlannedTrajectory& traj,
                              double dt_plan) = 0;
    virtual Fidelity fidelity() const = 0;
    virtual std::optional<ControlCommand> last_command() const { return std::nullopt; }
};

class LowFidelityBackend final : public Backend {
public:
    explicit LowFidelityBackend(VehicleParams params) : params_(std::move(params)) {}

    VehicleState step(const VehicleState& state, const PlannedTrajectory& traj,
                      double dt_plan) override {
        return lofi_step(state, traj, params_, dt_plan);
    }
    Fidelity fidelity() const override { return Fidelity::low; }

private:
    VehicleParams params_;
};

class HighFidelityBackend final : public Backend {
public:
    HighFidelityBackend(VehicleParams params, int substeps,
                        ControllerGains gains = ControllerGains{}, unsigned long long seed = 0,
                        double noise_accel_std = 0.0);

    VehicleState step(const VehicleState& state, const PlannedTrajectory& traj,
                      double dt_plan) override;
    Fidelity fidelity() const override { return Fidelity::high; }
    std::optional<ControlCommand> last_command() const override { return last_command_; }

private:
    VehicleParams params_;
    ControllerGains gains_;
    int substeps_;
    double pi_integral_ = 0.0;
    double accel_state_ = 0.0;
    double noise_accel_std_ = 0.0;
    std::mt19937_64 rng_;
    std::optional<ControlCommand> last_command_;
};

std::unique_ptr<Backend> make_backend(Fidelity fidelity, const VehicleParams& params,
                                      int substeps, unsigned long long seed = 0,
                                      double noise_accel_std = 0.0);

}  // namespace mfsim
