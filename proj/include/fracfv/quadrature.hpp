#pragma once

#include <functional>
#include <vector>

namespace fracfv {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached rule; computed once per order via Newton iteration on P_n.
const GaussLegendre& gauss_legendre(int n);

/// Integrate f over [a, b] with the n-point Gauss-Legendre rule.
double gl_integrate(const std::function<double(double)>& f, double a, double b, int n);

/// Tanh-sinh (double-exponential) quadrature on (a, b).
/// Robust for integrable endpoint singularities; the integrand is
/// evaluated through its distance to the nearest endpoint, so it is
/// never called exactly at a or b.
///
/// `f` receives (x, dist) where dist = min(x - a, b - x) computed
/// without cancellation. Converges to `rel_tol` or max_level doublings.
double tanh_sinh(const std::function<double(double, double)>& f, double a, double b,
                 double rel_tol = 1e-13, int max_level = 12);

/// Convenience wrapper for integrands that do not need the endpoint distance.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-13, int max_level = 12);

} // namespace fracfv
