#pragma once

namespace fracfv {

/// Self-similar solution of the fractional heat equation at order one:
/// C(d) t / (t^2 + r^2)^{(d+1)/2} with C(1) = 1/pi, C(2) = 1/(2 pi),
/// normalised to unit mass. `r` is the distance from the origin.
double heat_kernel_alpha1(int d, double t, double r);

/// Whole-line solution of the order-one drift-diffusion equation.
double lfp_exact_1d(double t, double x);

/// Its steady state (1/pi) / (1 + x^2).
double lfp_steady_1d(double x);

/// Steady state of the classical Fokker-Planck equation, (2 pi)^{-d/2} e^{-r^2/2}.
double gaussian_steady(int d, double r);

/// Whole-plane solution of the order-one drift-diffusion equation in 2D.
double lfp_exact_2d(double t, double x, double y);

/// Its steady state (1/(2 pi)) (1 + x^2 + y^2)^{-3/2}.
double lfp_steady_2d(double x, double y);

/// Principal-value integral of (R-y)^{1-alpha/2} (R+y)^{alpha/2-1} / (y-x)
/// over (-R, R), evaluated by subtracting the pole analytically.
double boundary_pv_integral(double alpha, double R, double x, double rel_tol = 1e-10);

/// Explicit steady profile of the zero-drift problem on (-R, R) for
/// alpha in (1, 2); the constants A and C are caller-supplied.
/// Throws OutOfDomain for |x| >= R.
double boundary_steady_profile(double alpha, double R, double x, double A, double C);

/// min(1, r^{-alpha-d}), the predicted far-field decay.
double tail_law(double alpha, int d, double r);

} // namespace fracfv
