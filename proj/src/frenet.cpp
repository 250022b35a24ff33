#include "mfsim/frenet.hpp"

#include <cmath>

#include "mfsim/errors.hpp"

namespace mfsim {

namespace {
constexpr double kFoldEps = 1e-6;
}

FrenetState cartesian_to_frenet(const ReferencePath& path, const Vec2& position, double heading,
                                double v, double a, double max_lateral,
                                std::optional<double> kappa_hint) {
    const PathProjection proj = path.project(position, max_lateral);
    const double kr = proj.curvature_ref;
    const double one_minus = 1.0 - kr * proj.d;
    if (std::abs(one_minus) < kFoldEps)
        throw ProjectionError("degenerate projection: pose at the curvature center");

    const double dpsi = angle_diff(heading, proj.heading_ref);
    const double cos_dpsi = std::cos(dpsi);
    const double sin_dpsi = std::sin(dpsi);

    FrenetState fs;
    fs.s = proj.s;
    fs.d = proj.d;
    fs.s_dot = v * cos_dpsi / one_minus;
    fs.d_dot = v * sin_dpsi;

    // Acceleration split. With the vehicle path curvature kx the planar
    // kinematics give (kappa_ref treated piecewise constant):
    //   t: s_ddot*(1-kr*d) - 2*kr*s_dot*d_dot = a*cos - v^2*kx*sin
    //   n: d_ddot + kr*s_dot^2*(1-kr*d)       = a*sin + v^2*kx*cos
    const double kx = kappa_hint ? *kappa_hint : kr * cos_dpsi / one_minus;
    const double v2kx = v * v * kx;
    fs.s_ddot = (a * cos_dpsi - v2kx * sin_dpsi + 2.0 * kr * fs.s_dot * fs.d_dot) / one_minus;
    fs.d_ddot = a * sin_dpsi + v2kx * cos_dpsi - kr * fs.s_dot * fs.s_dot * one_minus;
    return fs;
}

CartesianState frenet_to_cartesian(const ReferencePath& path, const FrenetState& fs) {
    const PathPose ref = path.pose_at(fs.s);
    const double kr = ref.curvature;
    const double one_minus = 1.0 - kr * fs.d;
    if (one_minus < kFoldEps)
        throw GeometryError("frenet_to_cartesian: |d*kappa| >= 1 (normal folding)");

    CartesianState out;
    out.position = ref.position + fs.d * path.frame_normal(fs.s);

    const double vt = fs.s_dot * one_minus;  // velocity along the reference tangent
    out.v = std::hypot(vt, fs.d_dot);

    double dpsi;
    if (out.v > 1e-9) {
        dpsi = std::atan2(fs.d_dot, vt);
    } else {
        // At rest the motion direction comes from the spatial derivative d' = dd/ds.
        const double dp = std::abs(fs.s_dot) > 1e-12 ? fs.d_dot / fs.s_dot : 0.0;
        dpsi = std::atan2(dp, one_minus);
    }
    out.heading = wrap_angle(ref.heading + dpsi);

    const double cos_dpsi = std::cos(dpsi);
    const double sin_dpsi = std::sin(dpsi);

    // Curvature from the s-parameterized derivatives d' and d''.
    double dp = 0.0, dpp = 0.0;
    if (std::abs(fs.s_dot) > 1e-9) {
        dp = fs.d_dot / fs.s_dot;
        dpp = (fs.d_ddot - dp * fs.s_ddot) / (fs.s_dot * fs.s_dot);
    }
    const double cos2 = cos_dpsi * cos_dpsi;
    out.curvature = ((dpp + dp * kr * std::tan(dpsi)) * cos2 / one_minus + kr) * cos_dpsi /
                    one_minus;

    const double at = fs.s_ddot * one_minus - 2.0 * kr * fs.s_dot * fs.d_dot;
    const double an = fs.d_ddot + kr * fs.s_dot * fs.s_dot * one_minus;
    out.a = at * cos_dpsi + an * sin_dpsi;
    return out;
}

}  // namespace mfsim
