#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "fracfv/convolve.hpp"
#include "fracfv/grid.hpp"
#include "fracfv/kernels.hpp"

namespace fracfv {

struct Box1D {
    double xmin, xmax;
    bool contains(double x) const { return x >= xmin && x <= xmax; }
};

struct Box2D {
    double xmin, xmax, ymin, ymax;
    bool contains(double x, double y) const {
        return x >= xmin && x <= xmax && y >= ymin && y <= ymax;
    }
};

struct Interval {
    double lo, hi;
};

/// L^p distance (p = 1 or 2) between cell averages and a reference, the
/// reference evaluated at cell centers; optionally restricted to a window.
double lp_distance(const Field1D& f, const Field1D& ref, int p, std::optional<Box1D> window = {});
double lp_distance(const Field1D& f, const std::function<double(double)>& ref, int p,
                   std::optional<Box1D> window = {});
double lp_distance(const Field2D& f, const Field2D& ref, int p, std::optional<Box2D> window = {});
double lp_distance(const Field2D& f, const std::function<double(double, double)>& ref, int p,
                   std::optional<Box2D> window = {});

/// L^p norm of a field (distance to zero).
double lp_norm(const Field1D& f, int p, std::optional<Box1D> window = {});
double lp_norm(const Field2D& f, int p, std::optional<Box2D> window = {});

/// Distance between fields on nested meshes (fine.N == 2 * coarse.N): the
/// coarse field is injected onto the fine grid and compared there.
double lp_distance_nested(const Field1D& coarse, const Field1D& fine, int p);
double lp_distance_nested(const Field2D& coarse, const Field2D& fine, int p);

struct ConvergenceFit {
    double slope = 0.0;               // least-squares slope of log(err) vs log(h)
    std::vector<double> pairwise;     // log2(e_k / e_{k+1}) for halved meshes
};

/// Requires >= 2 positive errors. A zero error yields an infinite order.
ConvergenceFit convergence_order(const std::vector<double>& errors,
                                 const std::vector<double>& spacings);

enum class EntropyKind { Quadratic, Boltzmann };

/// Relative entropy sum Phi(rho/steady) * steady * dx^d with
/// Phi(r) = (r-1)^2 or r(log r - 1) + 1; Phi(0) = 1 for the Boltzmann branch.
double relative_entropy(const Field1D& f, const std::function<double(double)>& steady,
                        EntropyKind kind);
double relative_entropy(const Field1D& f, const Field1D& steady, EntropyKind kind);
double relative_entropy(const Field2D& f, const std::function<double(double, double)>& steady,
                        EntropyKind kind);
double relative_entropy(const Field2D& f, const Field2D& steady, EntropyKind kind);

/// Least-squares slope of log(value) against t over the window.
double decay_rate_fit(const std::vector<double>& times, const std::vector<double>& values,
                      Interval window);

/// Slope of log(rho) against log(r) over cells with |x| (1D) or radius (2D)
/// inside the window; 2D samples are averaged in logarithmic radial bins.
double tail_exponent_fit(const Field1D& f, Interval radius_window);
double tail_exponent_fit(const Field2D& f, Interval radius_window, int bins = 12);

/// Relative deviation (max-min)/mean of the discrete Riesz potential
/// I(x) = sum_k rho_k K(|i-k|) over the interior fraction of the domain.
double riesz_flatness(const Field1D& f, const KernelTable1D& table,
                      double interior_fraction = 0.8);
double riesz_flatness(const Field2D& f, const KernelTable2D& table,
                      double interior_fraction = 0.8);

struct DiagnosticsRow {
    double t = 0.0;
    double mass = 0.0;
    double l1 = std::numeric_limits<double>::quiet_NaN();
    double l2 = std::numeric_limits<double>::quiet_NaN();
    double ent_quad = std::numeric_limits<double>::quiet_NaN();
    double ent_boltz = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
};

struct Diagnostics {
    std::vector<DiagnosticsRow> rows;

    std::vector<double> times() const;
    std::vector<double> column(double DiagnosticsRow::*member) const;
};

/// Observer that accumulates the diagnostic time series of a run; distances
/// and entropies are measured against `reference` when one is given.
class DiagnosticsRecorder1D {
public:
    explicit DiagnosticsRecorder1D(std::function<double(double)> reference = {});
    void operator()(double t, const Field1D& f);
    const Diagnostics& diagnostics() const { return diag_; }

private:
    std::function<double(double)> ref_;
    Diagnostics diag_;
    Eigen::VectorXd prev_;
    double prev_t_ = 0.0;
    bool has_prev_ = false;
};

class DiagnosticsRecorder2D {
public:
    explicit DiagnosticsRecorder2D(std::function<double(double, double)> reference = {});
    void operator()(double t, const Field2D& f);
    const Diagnostics& diagnostics() const { return diag_; }

private:
    std::function<double(double, double)> ref_;
    Diagnostics diag_;
    Eigen::VectorXd prev_;
    double prev_t_ = 0.0;
    bool has_prev_ = false;
};

} // namespace fracfv
