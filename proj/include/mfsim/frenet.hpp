#pragma once

#include <optional>

#include "mfsim/reference_path.hpp"

namespace mfsim {

struct FrenetState {
    double s = 0.0;
    double s_dot = 0.0;
    double s_ddot = 0.0;
    double d = 0.0;  // signed lateral, positive left
    double d_dot = 0.0;
    double d_ddot = 0.0;
};

struct CartesianState {
    Vec2 position;
    double heading = 0.0;  // wrapped to (-pi, pi]
    double v = 0.0;
    double a = 0.0;
    double curvature = 0.0;
};

/// Projects a Cartesian pose+velocity onto the path. The optional
/// kappa_hint is the vehicle's own path curvature (tan(steer)/wheelbase)
/// used to split acceleration into tangential/normal components; without
/// it a path-parallel approximation is used.
/// Throws ProjectionError when the pose is farther than max_lateral.
FrenetState cartesian_to_frenet(const ReferencePath& path, const Vec2& position, double heading,
                                double v, double a, double max_lateral,
                                std::optional<double> kappa_hint = std::nullopt);

/// Inverse map. Curvature combines the reference curvature with the
/// lateral motion via the standard Frenet kinematic relations.
/// Throws GeometryError when 1 - kappa_ref*d collapses (normal folding).
CartesianState frenet_to_cartesian(const ReferencePath& path, const FrenetState& fs);

}  // namespace mfsim
