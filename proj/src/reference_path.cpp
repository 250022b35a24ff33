#include "mfsim/reference_path.hpp"

#include <algorithm>
#include <cmath>

#include "mfsim/errors.hpp"

namespace mfsim {

ReferencePath::ReferencePath(const Centerline& centerline) {
    if (centerline.samples.size() < 2)
        throw ValidationError("ReferencePath needs a centerline with >= 2 samples");
    const size_t n = centerline.samples.size();
    s_.reserve(n);
    pos_.reserve(n);
    heading_.reserve(n);
    curvature_.reserve(n);
    for (const CenterlineSample& c : centerline.samples) {
        s_.push_back(c.s);
        pos_.push_back(c.position());
        heading_.push_back(c.heading);
        curvature_.push_back(c.curvature);
    }
}

size_t ReferencePath::segment_index(double s) const {
    size_t i = std::upper_bound(s_.begin(), s_.end(), s) - s_.begin();
    if (i == 0) i = 1;
    if (i >= s_.size()) i = s_.size() - 1;
    return i - 1;
}

// Curvature governing the interval [s_j, s_j+1]. Samples sit exactly on road
// segment boundaries and a boundary sample carries the earlier segment's
// curvature, so the interval's geometry always matches its right sample.
double ReferencePath::interval_curvature(size_t j) const { return curvature_[j + 1]; }

PathPose ReferencePath::interpolate(double s) const {
    const size_t j = segment_index(s);
    const double u = s - s_[j];
    const double k = interval_curvature(j);
    PathPose pose;
    pose.heading = heading_[j] + k * u;
    pose.curvature = k;
    pose.s = s;
    if (k == 0.0) {
        pose.position = pos_[j] + u * heading_dir(heading_[j]);
    } else {
        pose.position = {pos_[j].x + (std::sin(pose.heading) - std::sin(heading_[j])) / k,
                         pos_[j].y - (std::cos(pose.heading) - std::cos(heading_[j])) / k};
    }
    return pose;
}

Vec2 ReferencePath::frame_normal(double s) const {
    const double L = length();
    return left_normal(interpolate(clamp(s, 0.0, L)).heading);
}

PathPose ReferencePath::pose_at(double s) const {
    const double L = length();
    if (s < 0.0 || s > L) {
        PathPose pose = interpolate(clamp(s, 0.0, L));
        pose.out_of_range = true;
        return pose;
    }
    return interpolate(s);
}

PathProjection ReferencePath::project(const Vec2& p, double max_lateral) const {
    // Exact nearest-point projection onto the piecewise straight/arc path.
    // Strict improvement keeps the smallest-s foot on exact distance ties.
    double best_d2 = std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    double best_d = 0.0;
    for (size_t j = 0; j + 1 < pos_.size(); ++j) {
        const double span = s_[j + 1] - s_[j];
        if (span <= 0.0) continue;
        const double k = interval_curvature(j);
        double u, dist, side;
        if (k == 0.0) {
            const Vec2 dir = heading_dir(heading_[j]);
            u = clamp((p - pos_[j]).dot(dir), 0.0, span);
            const Vec2 foot = pos_[j] + u * dir;
            dist = (p - foot).norm();
            side = dir.cross(p - foot) >= 0.0 ? 1.0 : -1.0;
        } else {
            const double r = 1.0 / std::abs(k);
            const double sigma = k > 0.0 ? 1.0 : -1.0;
            const Vec2 center = pos_[j] + (1.0 / k) * left_normal(heading_[j]);
            const Vec2 v0 = pos_[j] - center;
            const Vec2 vp = p - center;
            const double rho = vp.norm();
            if (rho < 1e-12) {
                // Exactly at the arc center: every arc point is equidistant;
                // keep the interval start (smallest s).
                u = 0.0;
                dist = r;
                side = sigma;
            } else {
                // Angle traveled from the interval start, measured in the
                // turn direction.
                double phi = std::atan2(v0.cross(vp), v0.dot(vp)) * sigma;
                if (phi < 0.0) phi += 2.0 * kPi;
                double arc = phi * r;
                if (arc > span) {
                    // Behind the start or past the end; clamp to the nearer
                    // endpoint along the shorter angular gap.
                    const double overshoot = arc - span;
                    const double wrap_gap = 2.0 * kPi * r - arc;
                    arc = wrap_gap < overshoot ? 0.0 : span;
                }
                u = arc;
                const PathPose foot = [&] {
                    PathPose f;
                    const double h = heading_[j] + k * u;
                    f.position = {pos_[j].x + (std::sin(h) - std::sin(heading_[j])) / k,
                                  pos_[j].y - (std::cos(h) - std::cos(heading_[j])) / k};
                    f.heading = h;
                    return f;
                }();
                dist = (p - foot.position).norm();
                side = heading_dir(foot.heading).cross(p - foot.position) >= 0.0 ? 1.0 : -1.0;
            }
        }
        const double d2 = dist * dist;
        if (d2 < best_d2) {
            best_d2 = d2;
            best_s = s_[j] + u;
            best_d = side * dist;
        }
    }

    PathProjection proj;
    proj.s = best_s;
    proj.d = best_d;
    const PathPose pose = interpolate(best_s);
    proj.heading_ref = pose.heading;
    proj.curvature_ref = pose.curvature;

    const Vec2 start_dir = heading_dir(heading_.front());
    const Vec2 end_dir = heading_dir(heading_.back());
    proj.out_of_range = (best_s <= 0.0 && (p - pos_.front()).dot(start_dir) < -1e-9) ||
                        (best_s >= length() && (p - pos_.back()).dot(end_dir) > 1e-9);

    if (std::abs(proj.d) > max_lateral)
        throw ProjectionError("pose is " + std::to_string(std::abs(proj.d)) +
                              " m from the reference path (limit " +
                              std::to_string(max_lateral) + " m)");
    return proj;
}

}  // namespace mfsim
