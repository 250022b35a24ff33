#include "mfsim/polynomial.hpp"

#include <Eigen/Dense>

#include "mfsim/errors.hpp"

namespace mfsim {

double QuinticPolynomial::value(double t) const {
    return a_[0] + t * (a_[1] + t * (a_[2] + t * (a_[3] + t * (a_[4] + t * a_[5]))));
}

double QuinticPolynomial::d1(double t) const {
    return a_[1] + t * (2 * a_[2] + t * (3 * a_[3] + t * (4 * a_[4] + t * 5 * a_[5])));
}

double QuinticPolynomial::d2(double t) const {
    return 2 * a_[2] + t * (6 * a_[3] + t * (12 * a_[4] + t * 20 * a_[5]));
}

double QuinticPolynomial::d3(double t) const {
    return 6 * a_[3] + t * (24 * a_[4] + t * 60 * a_[5]);
}

double QuinticPolynomial::jerk_squared_integral(double T) const {
    const double a3 = a_[3], a4 = a_[4], a5 = a_[5];
    const double T2 = T * T, T3 = T2 * T, T4 = T3 * T, T5 = T4 * T;
    return 36.0 * a3 * a3 * T + 144.0 * a3 * a4 * T2 + (192.0 * a4 * a4 + 240.0 * a3 * a5) * T3 +
           720.0 * a4 * a5 * T4 + 720.0 * a5 * a5 * T5;
}

double QuarticPolynomial::value(double t) const {
    return a_[0] + t * (a_[1] + t * (a_[2] + t * (a_[3] + t * a_[4])));
}

double QuarticPolynomial::d1(double t) const {
    return a_[1] + t * (2 * a_[2] + t * (3 * a_[3] + t * 4 * a_[4]));
}

double QuarticPolynomial::d2(double t) const {
    return 2 * a_[2] + t * (6 * a_[3] + t * 12 * a_[4]);
}

double QuarticPolynomial::d3(double t) const { return 6 * a_[3] + t * 24 * a_[4]; }

double QuarticPolynomial::jerk_squared_integral(double T) const {
    const double a3 = a_[3], a4 = a_[4];
    return 36.0 * a3 * a3 * T + 144.0 * a3 * a4 * T * T + 192.0 * a4 * a4 * T * T * T;
}

QuinticPolynomial solve_quintic(double x0, double v0, double a0, double xT, double T) {
    return solve_quintic(x0, v0, a0, xT, 0.0, 0.0, T);
}

QuinticPolynomial solve_quintic(double x0, double v0, double a0, double xT, double vT,
                                double aT, double T) {
    if (!(T > 0.0)) throw ValidationError("quintic horizon T must be > 0");
    const double c0 = x0, c1 = v0, c2 = a0 / 2.0;
    const double T2 = T * T, T3 = T2 * T, T4 = T3 * T, T5 = T4 * T;
    Eigen::Matrix3d m;
    m << T3, T4, T5,                       //
        3 * T2, 4 * T3, 5 * T4,            //
        6 * T, 12 * T2, 20 * T3;
    Eigen::Vector3d rhs(xT - c0 - c1 * T - c2 * T2,  //
                        vT - c1 - 2 * c2 * T,        //
                        aT - 2 * c2);
    const Eigen::Vector3d sol = m.partialPivLu().solve(rhs);
    return QuinticPolynomial({c0, c1, c2, sol[0], sol[1], sol[2]});
}

QuarticPolynomial solve_quartic_velocity_keeping(double x0, double v0, double a0, double vT,
                                                 double T) {
    if (!(T > 0.0)) throw ValidationError("quartic horizon T must be > 0");
    const double c0 = x0, c1 = v0, c2 = a0 / 2.0;
    const double T2 = T * T, T3 = T2 * T;
    Eigen::Matrix2d m;
    m << 3 * T2, 4 * T3,  //
        6 * T, 12 * T2;
    Eigen::Vector2d rhs(vT - c1 - 2 * c2 * T, -2 * c2);
    const Eigen::Vector2d sol = m.partialPivLu().solve(rhs);
    return QuarticPolynomial({c0, c1, c2, sol[0], sol[1]});
}

}  // namespace mfsim
