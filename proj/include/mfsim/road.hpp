#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mfsim/geometry.hpp"

namespace mfsim {

/// Parameterized single-turn road: entry straight, circular arc, exit straight.
/// A zero turn angle produces a straight road; the radius is then ignored.
struct RoadSpec {
    double entry_length = 40.0;       // m, >= 0
    std::optional<double> radius;     // m, > 0; absent => straight
    double turn_angle = 0.0;          // rad, signed; positive = left turn
    double exit_length = 40.0;        // m, >= 0
    double lane_width = 3.5;          // m, in [2, 6]
    double sample_step = 0.5;         // m, > 0; <= radius/2 when radius present

    bool operator==(const RoadSpec&) const = default;
};

/// Throws ValidationError naming the offending field.
void validate(const RoadSpec& spec);

struct CenterlineSample {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;    // rad, continuous (not wrapped)
    double curvature = 0.0;  // 1/m, signed (+ = left)
    double s = 0.0;          // cumulative arclength, m

    Vec2 position() const { return {x, y}; }
    bool operator==(const CenterlineSample&) const = default;
};

struct Centerline {
    std::vector<CenterlineSample> samples;

    double length() const { return samples.empty() ? 0.0 : samples.back().s; }
    bool operator==(const Centerline&) const = default;
};

/// One piece of a piecewise road: a straight of given length or a circular arc.
struct RoadSegment {
    enum class Kind { straight, arc };

    Kind kind = Kind::straight;
    double length = 0.0;  // m (straight)
    double radius = 0.0;  // m (arc)
    double angle = 0.0;   // rad, signed (arc)

    static RoadSegment make_straight(double length) {
        return {Kind::straight, length, 0.0, 0.0};
    }
    static RoadSegment make_arc(double radius, double angle) {
        return {Kind::arc, 0.0, radius, angle};
    }

    double arclength() const {
        return kind == Kind::straight ? length : radius * std::abs(angle);
    }
    double curvature() const {
        if (kind == Kind::straight || angle == 0.0) return 0.0;
        return (angle > 0.0 ? 1.0 : -1.0) / radius;
    }

    bool operator==(const RoadSegment&) const = default;
};

void validate(std::span<const RoadSegment> segments, double lane_width, double sample_step);

struct Pose2 {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;

    bool operator==(const Pose2&) const = default;
};

/// Atomic lane: centerline plus boundary polylines offset +-lane_width/2
/// along the local left normal. Boundaries share the centerline sample count.
struct Lanelet {
    std::vector<Vec2> left_boundary;
    std::vector<Vec2> right_boundary;
    Centerline centerline;
    double lane_width = 3.5;

    bool operator==(const Lanelet&) const = default;
};

/// Samples a piecewise straight/arc chain starting from `start`, keeping
/// consecutive sample spacing <= sample_step. Segment boundaries are hit
/// exactly; a sample on a boundary carries the earlier segment's curvature.
Centerline build_centerline(std::span<const RoadSegment> segments, const Pose2& start,
                            double sample_step);

Lanelet make_lanelet(Centerline centerline, double lane_width);

/// Compiles a RoadSpec to a lanelet starting at the origin heading +x.
/// Tangent-continuous at both straight/arc joins; positive angle turns left.
Lanelet build_turn_road(const RoadSpec& spec);

/// Segment decomposition used by build_turn_road; exposed for serialization.
std::vector<RoadSegment> turn_road_segments(const RoadSpec& spec);

Lanelet build_segment_road(std::span<const RoadSegment> segments, const Pose2& origin,
                           double lane_width, double sample_step);

}  // namespace mfsim
