#include "fracfv/scheme1d.hpp"

#include <cmath>
#include <stdexcept>

#include "fracfv/errors.hpp"

namespace fracfv {

Velocity1D advection_velocities(const Grid1D& grid, double beta) {
    if (beta < 0.0) throw std::invalid_argument("advection_velocities: beta must be >= 0");
    Velocity1D vel;
    vel.beta = beta;
    vel.potential.resize(grid.N);
    for (int i = 0; i < grid.N; ++i) {
        const double x = grid.center(i);
        vel.potential[i] = 0.5 * beta * x * x;
    }
    vel.v.resize(std::max(grid.N - 1, 0));
    for (int i = 0; i + 1 < grid.N; ++i)
        vel.v[i] = -(vel.potential[i + 1] - vel.potential[i]) / grid.dx;
    return vel;
}

double upwind_flux(double rho_left, double rho_right, double v) {
    return rho_left * std::max(v, 0.0) + rho_right * std::min(v, 0.0);
}

double minmod(double a, double b, double c) {
    if (a > 0.0 && b > 0.0 && c > 0.0) return std::min(std::min(a, b), c);
    if (a < 0.0 && b < 0.0 && c < 0.0) return std::max(std::max(a, b), c);
    return 0.0;
}

ReconstructedStates reconstruct_states(const Field1D& field) {
    const int N = field.grid.N;
    if (N < 2) throw std::invalid_argument("reconstruct_states: needs at least two cells");
    const double dx = field.grid.dx;
    const Eigen::VectorXd& r = field.values;
    ReconstructedStates st{r, r};
    for (int i = 1; i + 1 < N; ++i) {
        const double slope = minmod((r[i] - r[i - 1]) / dx, (r[i + 1] - r[i - 1]) / (2.0 * dx),
                                    (r[i + 1] - r[i]) / dx);
        st.east[i] = r[i] + 0.5 * dx * slope;
        st.west[i] = r[i] - 0.5 * dx * slope;
    }
    return st;
}

namespace {

// Second difference of the kernel deviations along rows: (L * D)(i, j) where the
// constant part of D drops out of L exactly. No-flux ends fold into one-sided rows.
void add_diffusion(Eigen::MatrixXd& A, const KernelTable1D& table, double dx) {
    const int N = static_cast<int>(A.rows());
    const double inv2 = 1.0 / (dx * dx);
    auto dev = [&](int i, int j) { return table.deviation(std::abs(i - j)); };
    for (int j = 0; j < N; ++j) {
        A(0, j) += (dev(0, j) - dev(1, j)) * inv2;
        for (int i = 1; i + 1 < N; ++i)
            A(i, j) += (2.0 * dev(i, j) - dev(i - 1, j) - dev(i + 1, j)) * inv2;
        A(N - 1, j) += (dev(N - 1, j) - dev(N - 2, j)) * inv2;
    }
}

// Shift diagonal entries so every column of A sums to zero; the discrete
// no-flux telescoping then conserves mass to solver precision. The shifts are
// at rounding level, far below the scheme's truncation error.
void enforce_zero_column_sums(Eigen::MatrixXd& A) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) A(j, j) -= A.col(j).sum();
}

std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> factor_step_matrix(
    const Eigen::MatrixXd& A, double dt, double* rcond_out) {
    Eigen::MatrixXd M = dt * A;
    M.diagonal().array() += 1.0;
    auto lu = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXd>>(M);
    const double rcond = lu->rcond();
    if (rcond_out) *rcond_out = rcond;
    if (!(rcond > 1e-15))
        throw SingularSystem("assemble_matrices: implicit step matrix is numerically singular",
                             rcond);
    return lu;
}

} // namespace

SchemeMatrices1D::SchemeMatrices1D(const Grid1D& grid, double alpha, double beta,
                                   const KernelTable1D& table, double dt)
    : grid_(grid), alpha_(alpha), beta_(beta), dt_(dt), table_(table) {
    if (!(dt > 0.0)) throw std::invalid_argument("assemble_matrices: dt must be positive");
    if (!table.matches(grid)) throw GridMismatch("assemble_matrices: table built for another grid");
    const int N = grid.N;
    const double dx = grid.dx;
    vel_ = advection_velocities(grid, beta);

    advection_ = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i + 1 < N; ++i) {
        const double v = vel_.v[i];
        const double vp = std::max(v, 0.0), vm = std::min(v, 0.0);
        advection_(i, i) += vp / dx;
        advection_(i, i + 1) += vm / dx;
        advection_(i + 1, i) -= vp / dx;
        advection_(i + 1, i + 1) -= vm / dx;
    }

    diffusion_ = Eigen::MatrixXd::Zero(N, N);
    add_diffusion(diffusion_, table_, dx);
    enforce_zero_column_sums(diffusion_);

    Eigen::MatrixXd A = advection_ + diffusion_;
    enforce_zero_column_sums(A);
    lu_full_ = factor_step_matrix(A, dt_, &rcond_);
    if (beta_ == 0.0) {
        lu_diff_ = lu_full_;
    } else {
        lu_diff_ = factor_step_matrix(diffusion_, dt_, nullptr);
    }
}

Eigen::MatrixXd SchemeMatrices1D::laplacian() const {
    const int N = grid_.N;
    const double inv2 = 1.0 / (grid_.dx * grid_.dx);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        if (i > 0) L(i, i - 1) = -inv2;
        if (i + 1 < N) L(i, i + 1) = -inv2;
        L(i, i) = ((i == 0 || i == N - 1) ? 1.0 : 2.0) * inv2;
    }
    return L;
}

double SchemeMatrices1D::max_velocity() const {
    return vel_.v.size() ? vel_.v.cwiseAbs().maxCoeff() : 0.0;
}

SchemeMatrices1D assemble_matrices(const Grid1D& grid, double alpha, double beta,
                                   const KernelTable1D& table, double dt) {
    return SchemeMatrices1D(grid, alpha, beta, table, dt);
}

namespace {

void check_finite(const Eigen::VectorXd& v, const char* where) {
    if (!v.allFinite()) throw SolverFailure(std::string(where) + ": non-finite solution");
}

} // namespace

Field1D implicit_step(const Field1D& state, const SchemeMatrices1D& m) {
    if (!state.grid.same_as(m.grid())) throw GridMismatch("implicit_step: grid mismatch");
    Field1D out{state.grid, m.stepper().solve(state.values)};
    check_finite(out.values, "implicit_step");
    return out;
}

Field1D imex_minmod_step(const Field1D& state, const SchemeMatrices1D& m, StepInfo* info) {
    if (!state.grid.same_as(m.grid())) throw GridMismatch("imex_minmod_step: grid mismatch");
    const int N = state.grid.N;
    const double dx = state.grid.dx;
    const double dt = m.dt();

    if (info) {
        info->cfl = m.max_velocity() * dt / dx;
        info->cfl_warning = info->cfl > 1.0;
    }

    Eigen::VectorXd star = state.values;
    if (m.beta() != 0.0 && N >= 2) {
        const ReconstructedStates st = reconstruct_states(state);
        Eigen::VectorXd flux(N - 1);
        for (int i = 0; i + 1 < N; ++i)
            flux[i] = upwind_flux(st.east[i], st.west[i + 1], m.velocities().v[i]);
        const double r = dt / dx;
        star[0] -= r * flux[0];
        for (int i = 1; i + 1 < N; ++i) star[i] -= r * (flux[i] - flux[i - 1]);
        star[N - 1] -= r * (0.0 - flux[N - 2]);
    }

    Field1D out{state.grid, m.diffusion_stepper().solve(star)};
    check_finite(out.values, "imex_minmod_step");
    return out;
}

namespace {

long long step_count(double t_final, double dt) {
    if (t_final < 0.0) throw std::invalid_argument("run: t_final must be >= 0");
    const double k = t_final / dt;
    long long n = std::llround(k);
    if (std::abs(k - static_cast<double>(n)) > 1e-9 * std::max(1.0, k))
        n = static_cast<long long>(std::ceil(k));
    return std::max<long long>(n, 0);
}

} // namespace

Field1D run(Field1D state, const SchemeMatrices1D& m, double t_final, int flux_order,
            const Observer1D& observer, RunStats* stats) {
    if (flux_order != 1 && flux_order != 2)
        throw std::invalid_argument("run: flux_order must be 1 or 2");
    const long long steps = step_count(t_final, m.dt());
    StepInfo info;
    bool cfl = false;
    for (long long k = 0; k < steps; ++k) {
        state = (flux_order == 1) ? implicit_step(state, m) : imex_minmod_step(state, m, &info);
        cfl = cfl || info.cfl_warning;
        if (observer) observer(static_cast<double>(k + 1) * m.dt(), state);
    }
    if (stats) {
        stats->steps = static_cast<int>(steps);
        stats->t = static_cast<double>(steps) * m.dt();
        stats->cfl_warning = cfl;
    }
    return state;
}

SteadyResult1D run_to_steady(Field1D state, const SchemeMatrices1D& m, int flux_order,
                             const SteadyOptions& opts, const Observer1D& observer) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("run_to_steady: tol must be positive");
    if (flux_order != 1 && flux_order != 2)
        throw std::invalid_argument("run_to_steady: flux_order must be 1 or 2");
    SteadyResult1D res;
    const double dt = m.dt();
    const double dx = m.grid().dx;
    StepInfo info;
    while (res.t < opts.t_max) {
        Field1D next =
            (flux_order == 1) ? implicit_step(state, m) : imex_minmod_step(state, m, &info);
        res.cfl_warning = res.cfl_warning || info.cfl_warning;
        res.residual = (next.values - state.values).cwiseAbs().sum() * dx / dt;
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
