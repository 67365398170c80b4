#pragma once

#include <functional>
#include <memory>

#include <Eigen/Core>
#include <Eigen/LU>

#include "fracfv/grid.hpp"
#include "fracfv/kernels.hpp"

namespace fracfv {

/// Interface velocities v_{i+1/2} = -(xi_{i+1} - xi_i)/dx for the quadratic
/// potential xi_i = beta |x_i|^2 / 2.
struct Velocity1D {
    double beta = 0.0;
    Eigen::VectorXd potential; // xi_i, one per cell
    Eigen::VectorXd v;         // N-1 interior interface values
};

Velocity1D advection_velocities(const Grid1D& grid, double beta);

/// Donor-cell flux: rho_left (v)^+ + rho_right (v)^-.
double upwind_flux(double rho_left, double rho_right, double v);

/// min of the three if all positive, max if all negative, else zero.
double minmod(double a, double b, double c);

/// Piecewise-linear east/west states with minmod-limited slopes;
/// boundary cells use slope zero.
struct ReconstructedStates {
    Eigen::VectorXd east;
    Eigen::VectorXd west;
};
ReconstructedStates reconstruct_states(const Field1D& field);

/// Assembled operators of the 1D scheme for one (grid, alpha, beta, dt):
/// A = A_ad + L D with upwind advection A_ad, discrete Neumann Laplacian L and
/// dense kernel matrix D. The implicit step solves (Id + dt A) through a dense
/// LU factorisation computed once. A second factorisation with the advection
/// removed serves the IMEX minmod step.
class SchemeMatrices1D {
public:
    SchemeMatrices1D(const Grid1D& grid, double alpha, double beta, const KernelTable1D& table,
                     double dt);

    const Grid1D& grid() const { return grid_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double dt() const { return dt_; }
    const Velocity1D& velocities() const { return vel_; }
    const KernelTable1D& table() const { return table_; }

    const Eigen::MatrixXd& advection_matrix() const { return advection_; }
    const Eigen::MatrixXd& diffusion_matrix() const { return diffusion_; } // L D
    Eigen::MatrixXd full_operator() const { return advection_ + diffusion_; }
    Eigen::MatrixXd laplacian() const;      // L as printed (positive semidefinite)
    Eigen::MatrixXd kernel_matrix() const { return table_.dense_matrix(); }

    const Eigen::PartialPivLU<Eigen::MatrixXd>& stepper() const { return *lu_full_; }
    const Eigen::PartialPivLU<Eigen::MatrixXd>& diffusion_stepper() const { return *lu_diff_; }

    double rcond_estimate() const { return rcond_; }
    double max_velocity() const;

private:
    Grid1D grid_;
    double alpha_, beta_, dt_;
    KernelTable1D table_;
    Velocity1D vel_;
    Eigen::MatrixXd advection_;
    Eigen::MatrixXd diffusion_;
    std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_full_;
    std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_diff_;
    double rcond_ = 0.0;
};

SchemeMatrices1D assemble_matrices(const Grid1D& grid, double alpha, double beta,
                                   const KernelTable1D& table, double dt);

/// One step of rho^{m+1} = (Id + dt A)^{-1} rho^m.
Field1D implicit_step(const Field1D& state, const SchemeMatrices1D& m);

struct StepInfo {
    bool cfl_warning = false; // max|v| dt / dx exceeded 1 for the explicit advection
    double cfl = 0.0;
};

/// Minmod-limited advective flux applied explicitly, diffusion implicitly.
Field1D imex_minmod_step(const Field1D& state, const SchemeMatrices1D& m,
                         StepInfo* info = nullptr);

using Observer1D = std::function<void(double t, const Field1D&)>;

struct RunStats {
    int steps = 0;
    double t = 0.0;
    bool cfl_warning = false;
};

/// Steps the state to t_final (a multiple of dt; rounded to the nearest step
/// count). flux_order 1 = fully implicit upwind, 2 = IMEX minmod.
Field1D run(Field1D state, const SchemeMatrices1D& m, double t_final, int flux_order = 1,
            const Observer1D& observer = {}, RunStats* stats = nullptr);

struct SteadyOptions {
    double tol = 1e-8;   // on the residual ||rho^{m+1} - rho^m||_1 / dt
    double t_max = 1e4;
};

struct SteadyResult1D {
    Field1D state;
    bool converged = false;
    double t = 0.0;
    int steps = 0;
    double residual = 0.0;
    bool cfl_warning = false;
};

SteadyResult1D run_to_steady(Field1D state, const SchemeMatrices1D& m, int flux_order,
                             const SteadyOptions& opts, const Observer1D& observer = {});

} // namespace fracfv
