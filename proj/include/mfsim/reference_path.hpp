#pragma once

#include <vector>

#include "mfsim/road.hpp"

namespace mfsim {

struct PathPose {
    Vec2 position;
    double heading = 0.0;    // rad, continuous along the path
    double curvature = 0.0;  // 1/m
    double s = 0.0;
    bool out_of_range = false;
};

struct PathProjection {
    double s = 0.0;  // arclength of the projection foot
    double d = 0.0;  // signed lateral offset, positive left of travel direction
    double heading_ref = 0.0;
    double curvature_ref = 0.0;
    bool out_of_range = false;
};

/// Arclength-indexed lookup over a centerline. Heading interpolates linearly
/// between samples; positions follow the exact constant-curvature advance of
/// the containing sampling interval (every interval lies inside one road
/// segment, so both views agree and projection inverts exactly). Queries
/// outside [0, length] clamp to the endpoints and set the out_of_range flag.
class ReferencePath {
public:
    explicit ReferencePath(const Centerline& centerline);

    double length() const { return s_.back(); }

    PathPose pose_at(double s) const;

    /// Exact nearest-point projection. Throws ProjectionError when the
    /// lateral offset exceeds max_lateral.
    PathProjection project(const Vec2& p, double max_lateral) const;

    /// Left normal of the lateral-offset frame at s.
    Vec2 frame_normal(double s) const;

    const std::vector<double>& arclengths() const { return s_; }

private:
    PathPose interpolate(double s) const;  // no clamping bookkeeping
    size_t segment_index(double s) const;
    double interval_curvature(size_t j) const;

    std::vector<double> s_;
    std::vector<Vec2> pos_;
    std::vector<double> heading_;
    std::vector<double> curvature_;
};

}  // namespace mfsim
