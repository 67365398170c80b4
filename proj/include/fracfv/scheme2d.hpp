#pragma once

#include <functional>
#include <memory>

#include <Eigen/Core>
#include <Eigen/LU>

#include "fracfv/convolve.hpp"
#include "fracfv/grid.hpp"
#include "fracfv/kernels.hpp"
#include "fracfv/scheme1d.hpp"

namespace fracfv {

enum class Axis { X, Y };

/// The shared N x N implicit system of one dimensionally split sub-problem:
/// within a grid line, transport (upwind advection + within-line diffusive
/// coupling K(|i-k|, 0)) is implicit; contributions of all frozen cells enter
/// the right-hand side at solve time. Translation invariance of the kernel
/// makes one factorisation valid for every line.
class RowSystem {
public:
    RowSystem(const Grid2D& grid, double alpha, double beta, const KernelTable2D& table, double dt,
              Axis axis);

    Axis axis() const { return axis_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double dt() const { return dt_; }
    int size() const { return n_; }
    double dx() const { return dx_; }

    const Eigen::VectorXd& velocities() const { return v_; }
    const Eigen::MatrixXd& transport() const { return transport_; } // A_ad + L D_row
    const Eigen::MatrixXd& line_kernel() const { return line_kernel_; } // D_row
    const Eigen::PartialPivLU<Eigen::MatrixXd>& stepper() const { return *lu_; }

private:
    Axis axis_;
    double alpha_, beta_, dt_, dx_;
    int n_;
    Eigen::VectorXd v_;
    Eigen::MatrixXd line_kernel_;
    Eigen::MatrixXd transport_;
    std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
};

RowSystem assemble_row_system(const Grid2D& grid, double alpha, double beta,
                              const KernelTable2D& table, double dt, Axis axis);

/// Bundles both axis systems and the kernel convolver for repeated stepping.
class SplitScheme2D {
public:
    SplitScheme2D(const Grid2D& grid, double alpha, double beta, const KernelTable2D& table,
                  double dt);

    const Grid2D& grid() const { return grid_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double dt() const { return dt_; }
    const KernelTable2D& table() const { return table_; }
    const RowSystem& system(Axis a) const { return a == Axis::X ? x_ : y_; }
    const KernelConvolver2D& convolver() const { return conv_; }

private:
    Grid2D grid_;
    double alpha_, beta_, dt_;
    KernelTable2D table_;
    RowSystem x_, y_;
    KernelConvolver2D conv_;
};

/// One sweep: every line along `axis` is advanced implicitly with all other
/// lines frozen at the incoming state. Lines are independent and may be solved
/// in parallel; the result does not depend on the thread count.
Field2D sweep(const Field2D& state, const SplitScheme2D& scheme, Axis axis, int threads = 1);

/// Lie splitting: x-sweep to the half state, then y-sweep.
Field2D split_step(const Field2D& state, const SplitScheme2D& scheme, int threads = 1);

/// Dense (N^2 x N^2) unsplit operator; test oracle, refuses N > 32.
class FullSystem2D {
public:
    static constexpr int kMaxN = 32;

    FullSystem2D(const Grid2D& grid, double alpha, double beta, const KernelTable2D& table,
                 double dt);

    const Grid2D& grid() const { return grid_; }
    double dt() const { return dt_; }
    const Eigen::MatrixXd& full_operator() const { return A_; }
    Field2D implicit_step(const Field2D& state) const;

private:
    Grid2D grid_;
    double dt_;
    Eigen::MatrixXd A_;
    std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
};

FullSystem2D assemble_full_2d(const Grid2D& grid, double alpha, double beta,
                              const KernelTable2D& table, double dt);

using Observer2D = std::function<void(double t, const Field2D&)>;

Field2D run_2d(Field2D state, const SplitScheme2D& scheme, double t_final,
               const Observer2D& observer = {}, int threads = 1, RunStats* stats = nullptr);

struct SteadyResult2D {
    Field2D state;
    bool converged = false;
    double t = 0.0;
    int steps = 0;
    double residual = 0.0;
};

SteadyResult2D run_to_steady_2d(Field2D state, const SplitScheme2D& scheme,
                                const SteadyOptions& opts, const Observer2D& observer = {},
                                int threads = 1);

} // namespace fracfv
