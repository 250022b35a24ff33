#include <cmath>

#include "doctest.h"
#include "mfsim/errors.hpp"
#include "mfsim/road.hpp"

using namespace mfsim;

namespace {

RoadSpec turn_spec(double radius, double angle_deg, double entry = 40.0, double exit = 40.0) {
    RoadSpec spec;
    spec.entry_length = entry;
    spec.exit_length = exit;
    spec.radius = radius;
    spec.turn_angle = deg_to_rad(angle_deg);
    return spec;
}

// Integrates the unit-speed heading ODE theta'(s) = kappa(s) with tiny steps;
// independent of the closed-form arc construction.
Vec2 integrate_endpoint(const RoadSpec& spec, double ds = 1e-4) {
    struct Piece {
        double length;
        double kappa;
    };
    std::vector<Piece> pieces;
    if (spec.entry_length > 0) pieces.push_back({spec.entry_length, 0.0});
    if (spec.turn_angle != 0.0)
        pieces.push_back({*spec.radius * std::abs(spec.turn_angle),
                          (spec.turn_angle > 0 ? 1.0 : -1.0) / *spec.radius});
    if (spec.exit_length > 0) pieces.push_back({spec.exit_length, 0.0});
    double x = 0, y = 0, theta = 0;
    for (const Piece& piece : pieces) {
        const long n = std::lround(piece.length / ds);
        const double h = piece.length / n;
        for (long i = 0; i < n; ++i) {
            // midpoint rule on the heading keeps the integrator honest at 1e-4
            const double mid = theta + piece.kappa * h / 2.0;
            x += h * std::cos(mid);
            y += h * std::sin(mid);
            theta += piece.kappa * h;
        }
    }
    return {x, y};
}

}  // namespace

TEST_CASE("straight road is 100 m with zero curvature everywhere") {
    RoadSpec spec;
    spec.entry_length = 50.0;
    spec.exit_length = 50.0;
    const Lanelet lanelet = build_turn_road(spec);
    CHECK(lanelet.centerline.length() == doctest::Approx(100.0).epsilon(1e-12));
    for (const CenterlineSample& c : lanelet.centerline.samples) {
        CHECK(c.curvature == 0.0);
        CHECK(c.heading == 0.0);
        CHECK(c.y == 0.0);
    }
}

TEST_CASE("90 degree arc from origin: center (0,10), endpoint (10,10), heading pi/2") {
    const Lanelet lanelet = build_turn_road(turn_spec(10.0, 90.0, 0.0, 0.0));
    const CenterlineSample& last = lanelet.centerline.samples.back();
    CHECK(last.x == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(last.y == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(last.heading == doctest::Approx(kPi / 2.0).epsilon(1e-12));
    CHECK(lanelet.centerline.length() == doctest::Approx(10.0 * kPi / 2.0).epsilon(1e-12));
}

TEST_CASE("120 degree arc endpoint matches the heading-ODE oracle within 1e-6") {
    const RoadSpec spec = turn_spec(10.0, 120.0, 0.0, 0.0);
    const Lanelet lanelet = build_turn_road(spec);
    CHECK(lanelet.centerline.length() == doctest::Approx(20.943951023931955).epsilon(1e-12));
    const Vec2 oracle = integrate_endpoint(spec);
    const CenterlineSample& last = lanelet.centerline.samples.back();
    CHECK(std::abs(last.x - oracle.x) < 1e-6);
    CHECK(std::abs(last.y - oracle.y) < 1e-6);
}

TEST_CASE("validation errors name the offending field") {
    RoadSpec bad = turn_spec(10.0, 90.0);
    bad.entry_length = -1.0;
    CHECK_THROWS_WITH_AS(build_turn_road(bad), doctest::Contains("entry_length"),
                         ValidationError);

    RoadSpec no_radius;
    no_radius.turn_angle = deg_to_rad(30.0);
    CHECK_THROWS_WITH_AS(build_turn_road(no_radius), doctest::Contains("radius"),
                         ValidationError);

    RoadSpec narrow = turn_spec(10.0, 90.0);
    narrow.lane_width = 1.0;
    CHECK_THROWS_WITH_AS(build_turn_road(narrow), doctest::Contains("lane_width"),
                         ValidationError);

    RoadSpec coarse = turn_spec(10.0, 90.0);
    coarse.sample_step = 6.0;
    CHECK_THROWS_WITH_AS(build_turn_road(coarse), doctest::Contains("sample_step"),
                         ValidationError);
}

TEST_CASE("centerline invariants over a grid of specs") {
    for (double radius : {10.0, 15.0, 30.0, 80.0}) {
        for (double angle : {-120.0, -60.0, 30.0, 90.0, 120.0}) {
            const RoadSpec spec = turn_spec(radius, angle);
            const Lanelet lanelet = build_turn_road(spec);
            const auto& samples = lanelet.centerline.samples;

            // s strictly increasing from 0, spacing <= sample_step*(1+1e-6)
            CHECK(samples.front().s == 0.0);
            for (size_t i = 1; i < samples.size(); ++i) {
                CHECK(samples[i].s > samples[i - 1].s);
                CHECK(samples[i].s - samples[i - 1].s <= spec.sample_step * (1.0 + 1e-6));
                CHECK(std::abs(samples[i].heading - samples[i - 1].heading) < kPi);
            }

            // total length and arc heading change
            const double arc_len = radius * std::abs(deg_to_rad(angle));
            CHECK(samples.back().s ==
                  doctest::Approx(spec.entry_length + arc_len + spec.exit_length)
                      .epsilon(1e-9));
            CHECK(samples.back().heading - samples.front().heading ==
                  doctest::Approx(deg_to_rad(angle)).epsilon(1e-9));

            // curvature values: 0 on straights, +-1/r strictly inside the arc
            const double expected_kappa = (angle > 0 ? 1.0 : -1.0) / radius;
            for (const CenterlineSample& c : samples) {
                const bool in_arc = c.s > spec.entry_length + 1e-9 &&
                                    c.s < spec.entry_length + arc_len - 1e-9;
                if (in_arc) CHECK(c.curvature == doctest::Approx(expected_kappa));
                if (c.s < spec.entry_length - 1e-9 ||
                    c.s > spec.entry_length + arc_len + 1e-9)
                    CHECK(c.curvature == 0.0);
            }

            // boundaries are exact +-w/2 normal offsets with matching count
            REQUIRE(lanelet.left_boundary.size() == samples.size());
            REQUIRE(lanelet.right_boundary.size() == samples.size());
            for (size_t i = 0; i < samples.size(); ++i) {
                const double gap =
                    (lanelet.left_boundary[i] - lanelet.right_boundary[i]).norm();
                CHECK(std::abs(gap - spec.lane_width) < 1e-6);
                const Vec2 expected_left =
                    samples[i].position() + (spec.lane_width / 2.0) * left_normal(samples[i].heading);
                CHECK((lanelet.left_boundary[i] - expected_left).norm() < 1e-12);
            }
        }
    }
}

TEST_CASE("mirror symmetry: (r,-g) is the reflection of (r,+g) across the entry axis") {
    for (double radius : {10.0, 50.0}) {
        for (double angle : {30.0, 120.0}) {
            const Lanelet plus = build_turn_road(turn_spec(radius, angle));
            const Lanelet minus = build_turn_road(turn_spec(radius, -angle));
            REQUIRE(plus.centerline.samples.size() == minus.centerline.samples.size());
            for (size_t i = 0; i < plus.centerline.samples.size(); ++i) {
                const CenterlineSample& p = plus.centerline.samples[i];
                const CenterlineSample& m = minus.centerline.samples[i];
                CHECK(std::abs(p.x - m.x) < 1e-9);
                CHECK(std::abs(p.y + m.y) < 1e-9);
                CHECK(std::abs(p.heading + m.heading) < 1e-9);
                CHECK(std::abs(p.curvature + m.curvature) < 1e-15);
            }
        }
    }
}

TEST_CASE("segment roads honor the origin pose") {
    const std::vector<RoadSegment> segments = {RoadSegment::make_straight(10.0)};
    const Lanelet lanelet =
        build_segment_road(segments, Pose2{3.0, 4.0, deg_to_rad(90.0)}, 3.5, 0.5);
    const CenterlineSample& first = lanelet.centerline.samples.front();
    const CenterlineSample& last = lanelet.centerline.samples.back();
    CHECK(first.x == doctest::Approx(3.0));
    CHECK(first.y == doctest::Approx(4.0));
    CHECK(last.x == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(last.y == doctest::Approx(14.0).epsilon(1e-12));
}
