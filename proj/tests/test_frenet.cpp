#include <cmath>
#include <random>

#include "doctest.h"
#include "mfsim/errors.hpp"
#include "mfsim/frenet.hpp"

using namespace mfsim;

namespace {

ReferencePath straight_path(double length = 60.0) {
    RoadSpec spec;
    spec.entry_length = length;
    spec.exit_length = 0.0;
    return ReferencePath(build_turn_road(spec).centerline);
}

ReferencePath arc_path(double radius, double angle_deg, double entry = 20.0) {
    RoadSpec spec;
    spec.entry_length = entry;
    spec.exit_length = 20.0;
    spec.radius = radius;
    spec.turn_angle = deg_to_rad(angle_deg);
    return ReferencePath(build_turn_road(spec).centerline);
}

}  // namespace

TEST_CASE("straight path: point on path and 1 m left") {
    const ReferencePath path = straight_path();
    const FrenetState on = cartesian_to_frenet(path, {7.0, 0.0}, 0.0, 5.0, 0.0, 7.0);
    CHECK(on.s == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(std::abs(on.d) < 1e-12);
    CHECK(on.s_dot == doctest::Approx(5.0).epsilon(1e-12));

    const FrenetState left = cartesian_to_frenet(path, {7.0, 1.0}, 0.0, 5.0, 0.0, 7.0);
    CHECK(left.d == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("frenet_to_cartesian: d=0 on straight gives the path point, curvature 0") {
    const ReferencePath path = straight_path();
    FrenetState fs;
    fs.s = 12.0;
    fs.s_dot = 8.0;
    const CartesianState cart = frenet_to_cartesian(path, fs);
    CHECK(cart.position.x == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(std::abs(cart.position.y) < 1e-12);
    CHECK(std::abs(cart.curvature) < 1e-12);
    CHECK(cart.v == doctest::Approx(8.0));
}

TEST_CASE("concentric offset on a 10 m arc: curvature 1/9 at d=+1 (left turn)") {
    const ReferencePath path = arc_path(10.0, 90.0, 0.0);
    FrenetState fs;
    fs.s = 10.0 * kPi / 4.0;  // mid-arc
    fs.s_dot = 5.0;
    fs.d = 1.0;
    const CartesianState cart = frenet_to_cartesian(path, fs);
    CHECK(cart.curvature == doctest::Approx(1.0 / 9.0).epsilon(1e-9));
}

TEST_CASE("normal folding is rejected") {
    const ReferencePath path = arc_path(10.0, 90.0, 0.0);
    FrenetState fs;
    fs.s = 10.0 * kPi / 4.0;  // mid-arc
    fs.d = 10.0;              // exactly at the arc center
    CHECK_THROWS_AS(frenet_to_cartesian(path, fs), GeometryError);
}

TEST_CASE("round trip frenet -> cartesian -> frenet within 1e-6 over 1000 random states") {
    const ReferencePath straight = straight_path(80.0);
    const ReferencePath arc = arc_path(12.0, 110.0);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const ReferencePath& path = i % 2 == 0 ? straight : arc;
        FrenetState fs;
        fs.s = 2.0 + u01(rng) * (path.length() - 4.0);
        fs.d = (u01(rng) - 0.5) * 2.0 * 3.5;  // |d| <= lane width
        const double kr = path.pose_at(fs.s).curvature;
        if (std::abs(1.0 - kr * fs.d) < 0.2) continue;  // skip near-folding draws
        fs.s_dot = 0.5 + u01(rng) * 12.0;
        fs.d_dot = (u01(rng) - 0.5) * 2.0;
        fs.s_ddot = (u01(rng) - 0.5) * 4.0;
        fs.d_ddot = (u01(rng) - 0.5) * 2.0;

        const CartesianState cart = frenet_to_cartesian(path, fs);
        const FrenetState back = cartesian_to_frenet(path, cart.position, cart.heading, cart.v,
                                                     cart.a, 8.0, cart.curvature);
        CHECK(std::abs(back.s - fs.s) < 1e-6);
        CHECK(std::abs(back.d - fs.d) < 1e-6);
        CHECK(std::abs(back.s_dot - fs.s_dot) < 1e-6);
        CHECK(std::abs(back.d_dot - fs.d_dot) < 1e-6);

        // heading/position re-projection consistency
        const CartesianState again = frenet_to_cartesian(path, back);
        CHECK((again.position - cart.position).norm() < 1e-6);
        CHECK(std::abs(angle_diff(again.heading, cart.heading)) < 1e-6);
        ++checked;
    }
    CHECK(checked > 900);
}

TEST_CASE("pose too far from the path raises a projection error") {
    const ReferencePath path = straight_path();
    CHECK_THROWS_AS(cartesian_to_frenet(path, {10.0, 8.0}, 0.0, 1.0, 0.0, 7.0),
                    ProjectionError);
}
