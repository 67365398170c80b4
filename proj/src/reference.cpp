#include "fracfv/reference.hpp"

#include <cmath>
#include <stdexcept>

#include "fracfv/errors.hpp"
#include "fracfv/quadrature.hpp"

namespace fracfv {

double heat_kernel_alpha1(int d, double t, double r) {
    if (d != 1 && d != 2) throw std::invalid_argument("heat_kernel_alpha1: d must be 1 or 2");
    if (!(t > 0.0)) throw std::invalid_argument("heat_kernel_alpha1: t must be positive");
    const double C = (d == 1) ? 1.0 / M_PI : 1.0 / (2.0 * M_PI);
    return C * t / std::pow(t * t + r * r, 0.5 * (d + 1));
}

double lfp_exact_1d(double t, double x) {
    const double et = std::exp(t);
    return (1.0 / M_PI) * et * (et - 1.0) / ((1.0 + x * x) * et * et - 2.0 * et + 1.0);
}

double lfp_steady_1d(double x) { return (1.0 / M_PI) / (1.0 + x * x); }

double gaussian_steady(int d, double r) {
    if (d != 1 && d != 2) throw std::invalid_argument("gaussian_steady: d must be 1 or 2");
    return std::pow(2.0 * M_PI, -0.5 * d) * std::exp(-0.5 * r * r);
}

double lfp_exact_2d(double t, double x, double y) {
    const double et = std::exp(t);
    const double r2 = x * x + y * y;
    return (1.0 / (2.0 * M_PI)) * et * et * (et - 1.0) /
           std::pow((1.0 + r2) * et * et - 2.0 * et + 1.0, 1.5);
}

double lfp_steady_2d(double x, double y) {
    return (1.0 / (2.0 * M_PI)) * std::pow(1.0 + x * x + y * y, -1.5);
}

namespace {

// g(y) = (R-y)^{1-alpha/2} (R+y)^{alpha/2-1}: bounded at y=R, integrably
// singular at y=-R, smooth inside.
double weight_g(double alpha, double R, double y) {
    return std::pow(R - y, 1.0 - 0.5 * alpha) * std::pow(R + y, 0.5 * alpha - 1.0);
}

double weight_g_prime(double alpha, double R, double y) {
    const double a = 1.0 - 0.5 * alpha;
    const double b = 0.5 * alpha - 1.0;
    return weight_g(alpha, R, y) * (-a / (R - y) + b / (R + y));
}

} // namespace

double boundary_pv_integral(double alpha, double R, double x, double rel_tol) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("boundary_pv_integral: alpha must lie in (1, 2)");
    if (!(std::abs(x) < R)) throw OutOfDomain("boundary_pv_integral: |x| must be < R");
    const double gx = weight_g(alpha, R, x);
    // Subtract the pole: PV int g/(y-x) = int (g(y)-g(x))/(y-x) + g(x) log((R-x)/(R+x)).
    // Near y=x the quotient is replaced by the midpoint derivative to avoid
    // cancellation; tanh-sinh absorbs the algebraic endpoint singularities,
    // with the singular factor evaluated through the endpoint distance.
    auto left = [&](double y, double dist) {
        if (std::abs(y - x) < 1e-7 * R) return weight_g_prime(alpha, R, 0.5 * (x + y));
        const double rp = (R + y <= x - y) ? dist : (R + y); // distance to -R
        const double g = std::pow(R - y, 1.0 - 0.5 * alpha) * std::pow(rp, 0.5 * alpha - 1.0);
        return (g - gx) / (y - x);
    };
    auto right = [&](double y, double dist) {
        if (std::abs(y - x) < 1e-7 * R) return weight_g_prime(alpha, R, 0.5 * (x + y));
        const double rm = (R - y <= y - x) ? dist : (R - y); // distance to +R
        const double g = std::pow(rm, 1.0 - 0.5 * alpha) * std::pow(R + y, 0.5 * alpha - 1.0);
        return (g - gx) / (y - x);
    };
    const double part1 = tanh_sinh(left, -R, x, rel_tol);
    const double part2 = tanh_sinh(right, x, R, rel_tol);
    return part1 + part2 + gx * std::log((R - x) / (R + x));
}

double boundary_steady_profile(double alpha, double R, double x, double A, double C) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("boundary_steady_profile: alpha must lie in (1, 2)");
    if (!(std::abs(x) < R)) throw OutOfDomain("boundary_steady_profile: |x| must be < R");
    const double cosf = std::cos(0.5 * M_PI * (alpha - 1.0));
    const double first = cosf * cosf * C * std::pow(R + x, 0.5 * alpha - 1.0) /
                         (M_PI * M_PI * std::pow(R - x, 1.0 - 0.5 * alpha)) *
                         boundary_pv_integral(alpha, R, x);
    const double second =
        A * std::sin(M_PI * (alpha - 1.0)) / (2.0 * M_PI * std::pow(R + x, 2.0 - alpha));
    return first + second;
}

double tail_law(double alpha, int d, double r) {
    const double ar = std::abs(r);
    if (ar <= 1.0) return 1.0;
    return std::pow(ar, -alpha - d);
}

} // namespace fracfv
