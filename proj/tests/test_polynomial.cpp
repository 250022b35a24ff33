#include <cmath>
#include <random>

#include "doctest.h"
#include "mfsim/errors.hpp"
#include "mfsim/polynomial.hpp"

using namespace mfsim;

namespace {

// Trapezoid quadrature of squared jerk; independent of the closed form.
template <typename Poly>
double numeric_jerk_sq(const Poly& poly, double T, int n = 20000) {
    double acc = 0.0;
    const double h = T / n;
    for (int i = 0; i <= n; ++i) {
        const double j = poly.d3(i * h);
        acc += (i == 0 || i == n) ? 0.5 * j * j : j * j;
    }
    return acc * h;
}

}  // namespace

TEST_CASE("quintic with all-zero boundaries is the zero polynomial") {
    const QuinticPolynomial q = solve_quintic(0, 0, 0, 0, 1.0);
    for (double c : q.coeffs()) CHECK(std::abs(c) < 1e-12);
}

TEST_CASE("quintic boundary residuals below 1e-9 (checked against a direct solve)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    std::uniform_real_distribution<double> horizon(0.5, 6.0);
    for (int i = 0; i < 200; ++i) {
        const double x0 = val(rng), v0 = val(rng), a0 = val(rng), xT = val(rng);
        const double T = horizon(rng);
        const QuinticPolynomial q = solve_quintic(x0, v0, a0, xT, T);
        CHECK(std::abs(q.value(0) - x0) < 1e-9);
        CHECK(std::abs(q.d1(0) - v0) < 1e-9);
        CHECK(std::abs(q.d2(0) - a0) < 1e-9);
        CHECK(std::abs(q.value(T) - xT) < 1e-9);
        CHECK(std::abs(q.d1(T)) < 1e-9);
        CHECK(std::abs(q.d2(T)) < 1e-9);
    }
}

TEST_CASE("quintic d0=1 to 0: doubling T scales peak jerk by 1/8") {
    const QuinticPolynomial q1 = solve_quintic(1, 0, 0, 0, 1.0);
    const QuinticPolynomial q2 = solve_quintic(1, 0, 0, 0, 2.0);
    auto peak_jerk = [](const QuinticPolynomial& q, double T) {
        double peak = 0.0;
        for (int i = 0; i <= 1000; ++i) peak = std::max(peak, std::abs(q.d3(i * T / 1000.0)));
        return peak;
    };
    CHECK(peak_jerk(q2, 2.0) == doctest::Approx(peak_jerk(q1, 1.0) / 8.0).epsilon(1e-9));
}

TEST_CASE("quartic velocity keeping: constant speed stays constant") {
    const QuarticPolynomial q = solve_quartic_velocity_keeping(5.0, 10.0, 0.0, 10.0, 3.0);
    for (int i = 0; i <= 30; ++i) {
        const double t = i * 0.1;
        CHECK(q.value(t) == doctest::Approx(5.0 + 10.0 * t).epsilon(1e-12));
        CHECK(q.d1(t) == doctest::Approx(10.0).epsilon(1e-12));
    }
}

TEST_CASE("quartic standing start to 10 m/s over 4 s: velocity never dips below -1e-9") {
    const QuarticPolynomial q = solve_quartic_velocity_keeping(0.0, 0.0, 0.0, 10.0, 4.0);
    double v_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 10000; ++i) v_min = std::min(v_min, q.d1(i * 4.0 / 10000.0));
    CHECK(v_min >= -1e-9);
    CHECK(q.d1(4.0) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("quartic terminal acceleration is 0 within 1e-9 for random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> val(-4.0, 12.0);
    std::uniform_real_distribution<double> horizon(0.5, 6.0);
    for (int i = 0; i < 200; ++i) {
        const double T = horizon(rng);
        const QuarticPolynomial q =
            solve_quartic_velocity_keeping(val(rng), val(rng), val(rng), val(rng), T);
        CHECK(std::abs(q.d2(T)) < 1e-9);
    }
}

TEST_CASE("closed-form jerk integrals match quadrature") {
    const QuinticPolynomial quintic = solve_quintic(1.2, -0.4, 0.3, -0.8, 2.5);
    CHECK(quintic.jerk_squared_integral(2.5) ==
          doctest::Approx(numeric_jerk_sq(quintic, 2.5)).epsilon(1e-6));
    const QuarticPolynomial quartic = solve_quartic_velocity_keeping(0.0, 2.0, 0.5, 9.0, 3.0);
    CHECK(quartic.jerk_squared_integral(3.0) ==
          doctest::Approx(numeric_jerk_sq(quartic, 3.0)).epsilon(1e-6));
}

TEST_CASE("non-positive horizons are rejected") {
    CHECK_THROWS_AS(solve_quintic(0, 0, 0, 1, 0.0), ValidationError);
    CHECK_THROWS_AS(solve_quartic_velocity_keeping(0, 0, 0, 1, -1.0), ValidationError);
}
