#include "fracfv/scheme2d.hpp"

#include <cmath>
#include <stdexcept>

#include "fracfv/errors.hpp"
#include "fracfv/threading.hpp"

namespace fracfv {

namespace {

void enforce_zero_column_sums(Eigen::MatrixXd& A) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) A(j, j) -= A.col(j).sum();
}

// Upwind advection entries of one grid line, flux-difference form.
void add_line_advection(Eigen::MatrixXd& A, const Eigen::VectorXd& v, double dx) {
    const int N = static_cast<int>(A.rows());
    for (int i = 0; i + 1 < N; ++i) {
        const double vp = std::max(v[i], 0.0), vm = std::min(v[i], 0.0);
        A(i, i) += vp / dx;
        A(i, i + 1) += vm / dx;
        A(i + 1, i) -= vp / dx;
        A(i + 1, i + 1) -= vm / dx;
    }
}

// (L * D_line)(i, j) with Neumann ends, D_line(i, j) = K(|i-j|, 0).
void add_line_diffusion(Eigen::MatrixXd& A, const KernelTable2D& table, double dx) {
    const int N = static_cast<int>(A.rows());
    const double inv2 = 1.0 / (dx * dx);
    auto k0 = [&](int i, int j) { return table.entry(std::abs(i - j), 0); };
    for (int j = 0; j < N; ++j) {
        A(0, j) += (k0(0, j) - k0(1, j)) * inv2;
        for (int i = 1; i + 1 < N; ++i)
            A(i, j) += (2.0 * k0(i, j) - k0(i - 1, j) - k0(i + 1, j)) * inv2;
        A(N - 1, j) += (k0(N - 1, j) - k0(N - 2, j)) * inv2;
    }
}

// Apply the discrete Neumann Laplacian L to a line vector.
void apply_line_laplacian(const Eigen::VectorXd& w, double dx, Eigen::VectorXd& out) {
    const int N = static_cast<int>(w.size());
    const double inv2 = 1.0 / (dx * dx);
    out.resize(N);
    out[0] = (w[0] - w[1]) * inv2;
    for (int i = 1; i + 1 < N; ++i) out[i] = (2.0 * w[i] - w[i - 1] - w[i + 1]) * inv2;
    out[N - 1] = (w[N - 1] - w[N - 2]) * inv2;
}

} // namespace

RowSystem::RowSystem(const Grid2D& grid, double alpha, double beta, const KernelTable2D& table,
                     double dt, Axis axis)
    : axis_(axis), alpha_(alpha), beta_(beta), dt_(dt), dx_(grid.dx), n_(grid.N) {
    if (!(dt > 0.0)) throw std::invalid_argument("assemble_row_system: dt must be positive");
    if (beta < 0.0) throw std::invalid_argument("assemble_row_system: beta must be >= 0");
    if (!table.matches(grid))
        throw GridMismatch("assemble_row_system: table built for another grid");
    if (n_ < 2) throw std::invalid_argument("assemble_row_system: needs at least two cells");

    // Quadratic potential: the cross-line part of xi is constant within a line,
    // so the interface velocities reduce to the 1D formula along this axis.
    v_.resize(n_ - 1);
    for (int i = 0; i + 1 < n_; ++i) {
        const double xa = grid.center(i), xb = grid.center(i + 1);
        v_[i] = -(0.5 * beta * xb * xb - 0.5 * beta * xa * xa) / dx_;
    }

    line_kernel_.resize(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) line_kernel_(i, k) = table.entry(std::abs(i - k), 0);

    transport_ = Eigen::MatrixXd::Zero(n_, n_);
    add_line_advection(transport_, v_, dx_);
    add_line_diffusion(transport_, table, dx_);
    enforce_zero_column_sums(transport_);

    Eigen::MatrixXd M = dt_ * transport_;
    M.diagonal().array() += 1.0;
    lu_ = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXd>>(M);
    if (!(lu_->rcond() > 1e-15))
        throw SingularSystem("assemble_row_system: step matrix numerically singular",
                             lu_->rcond());
}

RowSystem assemble_row_system(const Grid2D& grid, double alpha, double beta,
                              const KernelTable2D& table, double dt, Axis axis) {
    return RowSystem(grid, alpha, beta, table, dt, axis);
}

SplitScheme2D::SplitScheme2D(const Grid2D& grid, double alpha, double beta,
                             const KernelTable2D& table, double dt)
    : grid_(grid),
      alpha_(alpha),
      beta_(beta),
      dt_(dt),
      table_(table),
      x_(grid, alpha, beta, table_, dt, Axis::X),
      y_(grid, alpha, beta, table_, dt, Axis::Y),
      conv_(table_) {}

Field2D sweep(const Field2D& state, const SplitScheme2D& scheme, Axis axis, int threads) {
    if (!state.grid.same_as(scheme.grid())) throw GridMismatch("sweep: grid mismatch");
    const RowSystem& sys = scheme.system(axis);
    const int N = sys.size();
    const double dt = sys.dt();
    const double dx = sys.dx();

    // Potential of the incoming state at every cell, computed once per sweep.
    const Eigen::VectorXd full_potential = scheme.convolver().apply(state.values);

    Field2D out{state.grid, Eigen::VectorXd(state.values.size())};
    const auto solve_lines = [&](int l0, int l1) {
        Eigen::VectorXd line(N), pot_line(N), frozen(N), lap(N), rhs(N);
        for (int l = l0; l < l1; ++l) {
            for (int i = 0; i < N; ++i) {
                const Eigen::Index idx = (axis == Axis::X)
                                             ? static_cast<Eigen::Index>(l) * N + i
                                             : static_cast<Eigen::Index>(i) * N + l;
                line[i] = state.values[idx];
                pot_line[i] = full_potential[idx];
            }
            // Frozen-cell potential = full potential minus the within-line part.
            frozen = pot_line - sys.line_kernel() * line;
            apply_line_laplacian(frozen, dx, lap);
            rhs = line - dt * lap;
            line = sys.stepper().solve(rhs);
            if (!line.allFinite())
                throw SolverFailure("sweep: non-finite solution on line " + std::to_string(l));
            for (int i = 0; i < N; ++i) {
                const Eigen::Index idx = (axis == Axis::X)
                                             ? static_cast<Eigen::Index>(l) * N + i
                                             : static_cast<Eigen::Index>(i) * N + l;
                out.values[idx] = line[i];
            }
        }
    };
    parallel_for(0, N, threads, solve_lines);
    return out;
}

Field2D split_step(const Field2D& state, const SplitScheme2D& scheme, int threads) {
    Field2D half = sweep(state, scheme, Axis::X, threads);
    return sweep(half, scheme, Axis::Y, threads);
}

FullSystem2D::FullSystem2D(const Grid2D& grid, double /*alpha*/, double beta,
                           const KernelTable2D& table, double dt)
    : grid_(grid), dt_(dt) {
    if (grid.N > kMaxN)
        throw std::invalid_argument("assemble_full_2d: refused, N > " + std::to_string(kMaxN));
    if (!(dt > 0.0)) throw std::invalid_argument("assemble_full_2d: dt must be positive");
    if (!table.matches(grid)) throw GridMismatch("assemble_full_2d: table built for another grid");
    const int N = grid.N;
    const double dx = grid.dx;
    const Eigen::Index M = static_cast<Eigen::Index>(N) * N;
    auto idx = [N](int i, int j) { return static_cast<Eigen::Index>(j) * N + i; };

    Eigen::VectorXd v(N - 1);
    for (int i = 0; i + 1 < N; ++i) {
        const double xa = grid.center(i), xb = grid.center(i + 1);
        v[i] = -(0.5 * beta * xb * xb - 0.5 * beta * xa * xa) / dx;
    }

    A_ = Eigen::MatrixXd::Zero(M, M);
    // Advection: x-interfaces within each row, y-interfaces within each column.
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i + 1 < N; ++i) {
            const double vp = std::max(v[i], 0.0), vm = std::min(v[i], 0.0);
            A_(idx(i, j), idx(i, j)) += vp / dx;
            A_(idx(i, j), idx(i + 1, j)) += vm / dx;
            A_(idx(i + 1, j), idx(i, j)) -= vp / dx;
            A_(idx(i + 1, j), idx(i + 1, j)) -= vm / dx;
        }
    }
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j + 1 < N; ++j) {
            const double vp = std::max(v[j], 0.0), vm = std::min(v[j], 0.0);
            A_(idx(i, j), idx(i, j)) += vp / dx;
            A_(idx(i, j), idx(i, j + 1)) += vm / dx;
            A_(idx(i, j + 1), idx(i, j)) -= vp / dx;
            A_(idx(i, j + 1), idx(i, j + 1)) -= vm / dx;
        }
    }

    // Diffusion: five-point Neumann Laplacian applied to the dense kernel matrix.
    Eigen::MatrixXd D(M, M);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i)
            for (int l = 0; l < N; ++l)
                for (int k = 0; k < N; ++k)
                    D(idx(i, j), idx(k, l)) = table.entry(std::abs(i - k), std::abs(j - l));
    const double inv2 = 1.0 / (dx * dx);
    for (Eigen::Index c = 0; c < M; ++c) {
        for (int j = 0; j < N; ++j) {
            for (int i = 0; i < N; ++i) {
                double acc = 0.0;
                // x-direction second difference
                if (i == 0)
                    acc += (D(idx(0, j), c) - D(idx(1, j), c)) * inv2;
                else if (i == N - 1)
                    acc += (D(idx(N - 1, j), c) - D(idx(N - 2, j), c)) * inv2;
                else
                    acc += (2.0 * D(idx(i, j), c) - D(idx(i - 1, j), c) - D(idx(i + 1, j), c)) * inv2;
                // y-direction second difference
                if (j == 0)
                    acc += (D(idx(i, 0), c) - D(idx(i, 1), c)) * inv2;
                else if (j == N - 1)
                    acc += (D(idx(i, N - 1), c) - D(idx(i, N - 2), c)) * inv2;
                else
                    acc += (2.0 * D(idx(i, j), c) - D(idx(i, j - 1), c) - D(idx(i, j + 1), c)) * inv2;
                A_(idx(i, j), c) += acc;
            }
        }
    }
    enforce_zero_column_sums(A_);

    Eigen::MatrixXd Mstep = dt_ * A_;
    Mstep.diagonal().array() += 1.0;
    lu_ = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXd>>(Mstep);
    if (!(lu_->rcond() > 1e-15))
        throw SingularSystem("assemble_full_2d: step matrix numerically singular", lu_->rcond());
}

Field2D FullSystem2D::implicit_step(const Field2D& state) const {
    if (!state.grid.same_as(grid_)) throw GridMismatch("FullSystem2D: grid mismatch");
    Field2D out{state.grid, lu_->solve(state.values)};
    if (!out.values.allFinite()) throw SolverFailure("FullSystem2D: non-finite solution");
    return out;
}

FullSystem2D assemble_full_2d(const Grid2D& grid, double alpha, double beta,
                              const KernelTable2D& table, double dt) {
    return FullSystem2D(grid, alpha, beta, table, dt);
}

Field2D run_2d(Field2D state, const SplitScheme2D& scheme, double t_final,
               const Observer2D& observer, int threads, RunStats* stats) {
    if (t_final < 0.0) throw std::invalid_argument("run_2d: t_final must be >= 0");
    const double dt = scheme.dt();
    const double k = t_final / dt;
    long long steps = std::llround(k);
    if (std::abs(k - static_cast<double>(steps)) > 1e-9 * std::max(1.0, k))
        steps = static_cast<long long>(std::ceil(k));
    for (long long s = 0; s < steps; ++s) {
        state = split_step(state, scheme, threads);
        if (observer) observer(static_cast<double>(s + 1) * dt, state);
    }
    if (stats) {
        stats->steps = static_cast<int>(steps);
        stats->t = static_cast<double>(steps) * dt;
    }
    return state;
}

SteadyResult2D run_to_steady_2d(Field2D state, const SplitScheme2D& scheme,
                                const SteadyOptions& opts, const Observer2D& observer,
                                int threads) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("run_to_steady_2d: tol must be positive");
    SteadyResult2D res;
    const double dt = scheme.dt();
    const double cell = scheme.grid().dx * scheme.grid().dx;
    while (res.t < opts.t_max) {
        Field2D next = split_step(state, scheme, threads);
        res.residual = (next.values - state.values).cwiseAbs().sum() * cell / dt;
        state = std::move(next);
        res.steps += 1;
        res.t = res.steps * dt;
        if (observer) observer(res.t, state);
        if (res.residual < opts.tol) {
            res.converged = true;
            break;
        }
    }
    res.state = std::move(state);
    return res;
}

} // namespace fracfv
