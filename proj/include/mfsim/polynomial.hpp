#pragma once

#include <array>

namespace mfsim {

/// Quintic boundary-value polynomial for lateral motion.
class QuinticPolynomial {
public:
    QuinticPolynomial() = default;
    explicit QuinticPolynomial(const std::array<double, 6>& coeffs) : a_(coeffs) {}

    double value(double t) const;
    double d1(double t) const;
    double d2(double t) const;
    double d3(double t) const;

    /// Closed-form integral of squared jerk over [0, T].
    double jerk_squared_integral(double T) const;

    const std::array<double, 6>& coeffs() const { return a_; }

private:
    std::array<double, 6> a_{};
};

/// Quartic velocity-keeping polynomial for longitudinal motion
/// (terminal position free).
class QuarticPolynomial {
public:
    QuarticPolynomial() = default;
    explicit QuarticPolynomial(const std::array<double, 5>& coeffs) : a_(coeffs) {}

    double value(double t) const;
    double d1(double t) const;
    double d2(double t) const;
    double d3(double t) const;

    double jerk_squared_integral(double T) const;

    const std::array<double, 5>& coeffs() const { return a_; }

private:
    std::array<double, 5> a_{};
};

/// Quintic through (x0, v0, a0) at t=0 and (xT, 0, 0) at t=T.
/// Throws ValidationError for T <= 0.
QuinticPolynomial solve_quintic(double x0, double v0, double a0, double xT, double T);

/// General quintic boundary-value solve with explicit terminal velocity
/// and acceleration.
QuinticPolynomial solve_quintic(double x0, double v0, double a0, double xT, double vT,
                                double aT, double T);

/// Quartic from (x0, v0, a0) at t=0 reaching velocity vT with zero
/// acceleration at t=T. Throws ValidationError for T <= 0.
QuarticPolynomial solve_quartic_velocity_keeping(double x0, double v0, double a0, double vT,
                                                 double T);

}  // namespace mfsim
