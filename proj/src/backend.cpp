#include "mfsim/backend.hpp"

#include <cmath>

#include "mfsim/errors.hpp"

namespace mfsim {

const char* to_string(Fidelity fidelity) {
    return fidelity == Fidelity::low ? "low" : "high";
}

double pure_pursuit_lateral(const VehicleState& state, const PlannedTrajectory& traj,
                            const VehicleParams& params, const ControllerGains& gains) {
    if (traj.states.empty()) throw ContractError("pure_pursuit_lateral: empty trajectory");
    const double lookahead =
        clamp(gains.k_lookahead * state.v, gains.lookahead_min, gains.lookahead_max);
    const Vec2 pos{state.x, state.y};

    // Closest trajectory sample, then walk the remaining arc distance.
    size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < traj.states.size(); ++i) {
        const double d2 = (traj.states[i].position() - pos).squared_norm();
        if (d2 < best) {
            best = d2;
            nearest = i;
        }
    }
    Vec2 target = traj.states.back().position();
    double remaining = lookahead;
    for (size_t i = nearest; i + 1 < traj.states.size(); ++i) {
        const Vec2 a = traj.states[i].position();
        const Vec2 b = traj.states[i + 1].position();
        const double seg = (b - a).norm();
        if (seg >= remaining && seg > 0.0) {
            target = a + (remaining / seg) * (b - a);
            remaining = 0.0;
            break;
        }
        remaining -= seg;
    }

    const Vec2 to_target = target - pos;
    const double dist = to_target.norm();
    if (dist < 1e-9) return 0.0;
    const double alpha = angle_diff(std::atan2(to_target.y, to_target.x), state.heading);
    const double steer = std::atan(2.0 * params.wheelbase * std::sin(alpha) / dist);
    return clamp(steer, -params.delta_max, params.delta_max);
}

double pi_longitudinal(const VehicleState& state, const PlannedTrajectory& traj,
                       const VehicleParams& params, const ControllerGains& gains,
                       double traj_time, double dt, double& integral) {
    if (traj.states.empty()) throw ContractError("pi_longitudinal: empty trajectory");
    const TrajectorySample ref = traj.state_at(traj_time);
    const double error = ref.v - state.v;
    const double raw = ref.a + gains.k_p * error + gains.k_i * integral;
    const double out = clamp(raw, -params.a_brake_max, params.a_accel_max);
    // Conditional integration: freeze while the command saturates and the
    // error would only push deeper, then clamp the integral contribution.
    const bool deeper = (raw > out && error > 0.0) || (raw < out && error < 0.0);
    if (!deeper) {
        integral += error * dt;
        const double bound = gains.integral_accel_clamp / gains.k_i;
        integral = clamp(integral, -bound, bound);
    }
    return out;
}

VehicleState lofi_step(const VehicleState& state, const PlannedTrajectory& traj,
                       const VehicleParams& params, double dt_plan) {
    if (traj.states.empty()) throw ContractError("lofi_step: empty trajectory");
    if (traj.horizon() < dt_plan - 1e-12)
        throw ContractError("lofi_step: trajectory shorter than dt_plan");
    const Vec2 start = traj.states.front().position();
    if ((start - Vec2{state.x, state.y}).norm() > 1e-9)
        throw ContractError("lofi_step: trajectory does not start at the current state");

    // Exact sample when dt_plan lies on the sampling grid (the default).
    TrajectorySample next;
    bool exact = false;
    for (const TrajectorySample& sample : traj.states) {
        if (std::abs(sample.t - dt_plan) < 1e-12) {
            next = sample;
            exact = true;
            break;
        }
        if (sample.t > dt_plan) break;
    }
    if (!exact) next = traj.state_at(dt_plan);

    VehicleState out;
    out.x = next.x;
    out.y = next.y;
    out.heading = wrap_angle(next.heading);
    out.v = next.v;
    out.a = next.a;
    out.steer = std::atan(params.wheelbase * next.curvature);
    out.t = state.t + dt_plan;
    return out;
}

double saturate_steering(double steer, double v, const VehicleParams& params) {
    if (steer == 0.0 || v <= 0.0) return steer;
    const double demanded = v * v * std::abs(std::tan(steer)) / params.wheelbase;
    const double limit = params.mu * kGravity;
    if (demanded <= limit) return steer;
    const double tan_eff = limit * params.wheelbase / (v * v);
    return std::copysign(std::atan(tan_eff), steer);
}

VehicleState integrate_bicycle(const VehicleState& state, double dt,
                               const VehicleParams& params) {
    const double steer_eff = saturate_steering(state.steer, state.v, params);
    VehicleState s = state;
    // Semi-implicit update: velocity first, then heading, then position.
    s.v = std::max(0.0, s.v + s.a * dt);
    if (s.v > params.v_max) s.v = params.v_max;
    s.heading = wrap_angle(s.heading + s.v * std::tan(steer_eff) / params.wheelbase * dt);
    s.x += s.v * std::cos(s.heading) * dt;
    s.y += s.v * std::sin(s.heading) * dt;
    s.t += dt;
    return s;
}

VehicleState hifi_step(const VehicleState& state, const PlannedTrajectory& traj,
                       const VehicleParams& params, double dt_plan, int substeps,
                       const ControllerGains& gains, double& pi_integral,
                       double& accel_state, ControlCommand* first_command,
                       std::mt19937_64* noise_rng, double noise_accel_std) {
    if (substeps < 1) throw ValidationError("hifi_step: substeps must be >= 1");
    if (traj.states.empty()) throw ContractError("hifi_step: empty trajectory");
    const double dt = dt_plan / substeps;
    const double alpha_steer = 1.0 - std::exp(-dt / params.tau_steer);
    const double alpha_accel = 1.0 - std::exp(-dt / params.tau_accel);

    VehicleState s = state;
    for (int i = 0; i < substeps; ++i) {
        const double tau = i * dt;
        ControlCommand cmd;
        cmd.steer_target = pure_pursuit_lateral(s, traj, params, gains);
        cmd.accel_target = pi_longitudinal(s, traj, params, gains, tau, dt, pi_integral);
        if (noise_rng && noise_accel_std > 0.0) {
            std::normal_distribution<double> noise(0.0, noise_accel_std);
            cmd.accel_target += noise(*noise_rng);
        }
        if (first_command && i == 0) *first_command = cmd;

        // First-order actuator lags; steering additionally rate-limited.
        const double dsteer = clamp((cmd.steer_target - s.steer) * alpha_steer,
                                    -params.steer_rate_max * dt, params.steer_rate_max * dt);
        s.steer = clamp(s.steer + dsteer, -params.delta_max, params.delta_max);
        accel_state = clamp(accel_state + (cmd.accel_target - accel_state) * alpha_accel,
                            -params.a_brake_max, params.a_accel_max);

        s.a = accel_state;
        s = integrate_bicycle(s, dt, params);
    }
    s.t = state.t + dt_plan;
    s.a = (s.v - state.v) / dt_plan;  // reported acceleration is the realized dv/dt

    if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.heading) ||
        !std::isfinite(s.v) || !std::isfinite(s.a) || !std::isfinite(s.steer))
        throw DynamicsError("hifi_step produced a non-finite state");
    return s;
}

HighFidelityBackend::HighFidelityBackend(VehicleParams params, int substeps,
                                         ControllerGains gains, unsigned long long seed,
                                         double noise_accel_std)
    : params_(std::move(params)),
      gains_(gains),
      substeps_(substeps),
      noise_accel_std_(noise_accel_std),
      rng_(seed) {
    if (substeps_ < 1) throw ValidationError("HighFidelityBackend: substeps must be >= 1");
}

VehicleState HighFidelityBackend::step(const VehicleState& state, const PlannedTrajectory& traj,
                                       double dt_plan) {
    ControlCommand cmd;
    VehicleState out =
        hifi_step(state, traj, params_, dt_plan, substeps_, gains_, pi_integral_, accel_state_,
                  &cmd, noise_accel_std_ > 0.0 ? &rng_ : nullptr, noise_accel_std_);
    last_command_ = cmd;
    return out;
}

std::unique_ptr<Backend> make_backend(Fidelity fidelity, const VehicleParams& params,
                                      int substeps, unsigned long long seed,
                                      double noise_accel_std) {
    if (fidelity == Fidelity::low) return std::make_unique<LowFidelityBackend>(params);
    return std::make_unique<HighFidelityBackend>(params, substeps, ControllerGains{}, seed,
                                                 noise_accel_std);
}

}  // namespace mfsim
