#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Core>

#include "fracfv/grid.hpp"

namespace fracfv {

/// Gamma function; throws PoleError at non-positive integers.
double gamma_fn(double x);

/// Riesz normalisation 2^g Gamma((d+g)/2) / (pi^{d/2} |Gamma(-g/2)|).
/// Throws ConstantUndefined when either gamma factor sits on a pole
/// (notably d=1, g=-1, i.e. alpha = 1 exactly in one dimension).
double riesz_constant(int d, double g);

/// The combination (alpha-1) * riesz_constant(1, alpha-2), which stays O(1)
/// as alpha -> 1+. Equals 2^{alpha-1} Gamma((alpha+1)/2) / (sqrt(pi) Gamma((2-alpha)/2)).
double riesz_prefactor_1d(double alpha);

/// Exact cell integral riesz_constant(1, alpha-2) * int_a^b |x-y|^{1-alpha} dy
/// via the closed antiderivative, valid for alpha in (1,2) and any placement
/// of x relative to [a, b] (the singularity at y=x is integrable).
double cell_kernel_1d(double alpha, double x, double a, double b);

/// Offset-indexed 1D kernel integrals on a uniform grid:
/// entry(m) == cell integral for cells whose centers are m*dx apart.
///
/// Entries are held as a shared positive base plus per-offset deviations.
/// The base carries the (alpha-1)^{-1} blow-up of the Riesz constant; it is
/// annihilated exactly by the discrete Laplacian, so schemes consume the
/// deviations and remain well conditioned down to alpha = 1 + 1e-11.
class KernelTable1D {
public:
    KernelTable1D() = default;
    KernelTable1D(double alpha, double R, int N, double dx,
                  double base, std::vector<double> deviations)
        : alpha_(alpha), R_(R), N_(N), dx_(dx), base_(base), dev_(std::move(deviations)) {}

    double alpha() const { return alpha_; }
    double R() const { return R_; }
    int size() const { return N_; }
    double dx() const { return dx_; }

    double base() const { return base_; }
    double deviation(int m) const { return dev_[static_cast<std::size_t>(m)]; }
    double entry(int m) const { return base_ + dev_[static_cast<std::size_t>(m)]; }
    double operator[](int m) const { return entry(m); }

    bool matches(const Grid1D& grid) const { return grid.R == R_ && grid.N == N_; }

    /// Dense kernel matrix D with D(i,k) = entry(|i-k|).
    Eigen::MatrixXd dense_matrix() const;

private:
    double alpha_ = 0.0;
    double R_ = 0.0;
    int N_ = 0;
    double dx_ = 0.0;
    double base_ = 0.0;
    std::vector<double> dev_;
};

KernelTable1D kernel_table_1d(const Grid1D& grid, double alpha);

/// Axis-aligned rectangle [ax, bx] x [ay, by].
struct Rect {
    double ax, bx, ay, by;
};

/// riesz_constant(2, alpha-2) * integral of |(px,py) - (u,v)|^{-alpha} over `cell`,
/// for alpha in (0,2). A point inside the closed cell is handled by splitting the
/// cell into rectangles cornered at the point; on each, the radial factor of the
/// integrand is integrated analytically and only smooth 1D profiles are quadratured.
/// Throws QuadratureFailure if the error estimate exceeds rel_tol.
double cell_kernel_2d(double alpha, double px, double py, const Rect& cell,
                      double rel_tol = 1e-10);

/// Offset-indexed 2D kernel integrals: entry(m,n) for cells offset by (m*dx, n*dx).
class KernelTable2D {
public:
    KernelTable2D() = default;
    KernelTable2D(double alpha, double R, int N, double dx, Eigen::MatrixXd offsets)
        : alpha_(alpha), R_(R), N_(N), dx_(dx), offsets_(std::move(offsets)) {}

    double alpha() const { return alpha_; }
    double R() const { return R_; }
    int size() const { return N_; }
    double dx() const { return dx_; }

    double entry(int m, int n) const { return offsets_(m, n); }
    const Eigen::MatrixXd& offsets() const { return offsets_; }

    bool matches(const Grid2D& grid) const { return grid.R == R_ && grid.N == N_; }

private:
    double alpha_ = 0.0;
    double R_ = 0.0;
    int N_ = 0;
    double dx_ = 0.0;
    Eigen::MatrixXd offsets_;
};

/// Builds the table with N^2 distinct cell integrals (not N^4).
/// Offset rows may be computed in parallel; the result does not depend on `threads`.
KernelTable2D kernel_table_2d(const Grid2D& grid, double alpha, int threads = 1);

/// Binary cache of kernel tables, keyed by (dimension, alpha, R, N, quadrature
/// version). Loading a matching file is bit-identical to recomputation.
inline constexpr std::uint32_t kKernelQuadratureVersion = 1;

void save_kernel_table(const KernelTable1D& table, const std::filesystem::path& path);
void save_kernel_table(const KernelTable2D& table, const std::filesystem::path& path);
KernelTable1D load_kernel_table_1d(const std::filesystem::path& path);
KernelTable2D load_kernel_table_2d(const std::filesystem::path& path);

/// Discrete Riesz potential of a field: out[i] = sum_k rho[k] * entry(|i-k|).
Eigen::VectorXd apply_kernel_1d(const KernelTable1D& table, const Eigen::VectorXd& rho);

/// Direct O(N^4) evaluation of the 2D potential; reference path for tests and
/// small grids.
Eigen::VectorXd apply_kernel_2d_direct(const KernelTable2D& table, const Eigen::VectorXd& rho);

} // namespace fracfv
