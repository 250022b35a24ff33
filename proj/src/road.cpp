#include "mfsim/road.hpp"

#include <cmath>
#include <string>

#include "mfsim/errors.hpp"

namespace mfsim {

void validate(const RoadSpec& spec) {
    if (!(spec.entry_length >= 0.0) || !std::isfinite(spec.entry_length))
        throw ValidationError("RoadSpec.entry_length must be >= 0");
    if (!(spec.exit_length >= 0.0) || !std::isfinite(spec.exit_length))
        throw ValidationError("RoadSpec.exit_length must be >= 0");
    if (spec.radius && !(*spec.radius > 0.0))
        throw ValidationError("RoadSpec.radius must be > 0 when present");
    if (spec.turn_angle != 0.0 && !spec.radius)
        throw ValidationError("RoadSpec.radius required for nonzero RoadSpec.turn_angle");
    if (!(spec.lane_width >= 2.0 && spec.lane_width <= 6.0))
        throw ValidationError("RoadSpec.lane_width must be in [2.0, 6.0]");
    if (!(spec.sample_step > 0.0))
        throw ValidationError("RoadSpec.sample_step must be > 0");
    if (spec.radius && spec.sample_step > *spec.radius / 2.0)
        throw ValidationError("RoadSpec.sample_step must be <= radius/2");
}

void validate(std::span<const RoadSegment> segments, double lane_width, double sample_step) {
    if (segments.empty()) throw ValidationError("road segments list is empty");
    if (!(lane_width >= 2.0 && lane_width <= 6.0))
        throw ValidationError("lane_width must be in [2.0, 6.0]");
    if (!(sample_step > 0.0)) throw ValidationError("sample_step must be > 0");
    for (const RoadSegment& seg : segments) {
        if (seg.kind == RoadSegment::Kind::straight) {
            if (!(seg.length >= 0.0)) throw ValidationError("segment length must be >= 0");
        } else {
            if (!(seg.radius > 0.0)) throw ValidationError("arc radius must be > 0");
            if (sample_step > seg.radius / 2.0)
                throw ValidationError("sample_step must be <= radius/2 for every arc");
        }
    }
}

namespace {

// Pose after traveling arclength u along a segment from pose p.
Pose2 advance(const Pose2& p, const RoadSegment& seg, double u) {
    const double k = seg.curvature();
    if (k == 0.0) {
        return {p.x + u * std::cos(p.heading), p.y + u * std::sin(p.heading), p.heading};
    }
    const double h = p.heading + k * u;
    return {p.x + (std::sin(h) - std::sin(p.heading)) / k,
            p.y - (std::cos(h) - std::cos(p.heading)) / k, h};
}

}  // namespace

Centerline build_centerline(std::span<const RoadSegment> segments, const Pose2& start,
                            double sample_step) {
    Centerline line;
    Pose2 seg_start = start;
    double s0 = 0.0;
    bool emitted_first = false;
    for (const RoadSegment& seg : segments) {
        const double len = seg.arclength();
        if (len <= 0.0) continue;
        const double k = seg.curvature();
        if (!emitted_first) {
            line.samples.push_back({seg_start.x, seg_start.y, seg_start.heading, k, 0.0});
            emitted_first = true;
        }
        const int n = std::max(1, static_cast<int>(std::ceil(len / sample_step - 1e-12)));
        const double du = len / n;
        for (int i = 1; i <= n; ++i) {
            const double u = (i == n) ? len : i * du;
            const Pose2 p = advance(seg_start, seg, u);
            line.samples.push_back({p.x, p.y, p.heading, k, s0 + u});
        }
        seg_start = advance(seg_start, seg, len);
        s0 += len;
    }
    if (line.samples.size() < 2) throw ValidationError("road has zero total length");
    return line;
}

Lanelet make_lanelet(Centerline centerline, double lane_width) {
    Lanelet lanelet;
    lanelet.lane_width = lane_width;
    lanelet.left_boundary.reserve(centerline.samples.size());
    lanelet.right_boundary.reserve(centerline.samples.size());
    const double half = lane_width / 2.0;
    for (const CenterlineSample& c : centerline.samples) {
        const Vec2 n = left_normal(c.heading);
        lanelet.left_boundary.push_back(c.position() + half * n);
        lanelet.right_boundary.push_back(c.position() - half * n);
    }
    lanelet.centerline = std::move(centerline);
    return lanelet;
}

std::vector<RoadSegment> turn_road_segments(const RoadSpec& spec) {
    std::vector<RoadSegment> segments;
    if (spec.entry_length > 0.0) segments.push_back(RoadSegment::make_straight(spec.entry_length));
    if (spec.turn_angle != 0.0 && spec.radius)
        segments.push_back(RoadSegment::make_arc(*spec.radius, spec.turn_angle));
    if (spec.exit_length > 0.0) segments.push_back(RoadSegment::make_straight(spec.exit_length));
    return segments;
}

Lanelet build_turn_road(const RoadSpec& spec) {
    validate(spec);
    const std::vector<RoadSegment> segments = turn_road_segments(spec);
    if (segments.empty()) throw ValidationError("RoadSpec describes a zero-length road");
    return make_lanelet(build_centerline(segments, Pose2{}, spec.sample_step), spec.lane_width);
}

Lanelet build_segment_road(std::span<const RoadSegment> segments, const Pose2& origin,
                           double lane_width, double sample_step) {
    validate(segments, lane_width, sample_step);
    return make_lanelet(build_centerline(segments, origin, sample_step), lane_width);
}

}  // namespace mfsim
