#include <doctest.h>

#include <cmath>

#include "fracfv/analysis.hpp"
#include "fracfv/errors.hpp"
#include "fracfv/reference.hpp"
#include "fracfv/scheme1d.hpp"

#include "test_support.hpp"

using namespace fracfv;

namespace {

// Independent application of the scheme operator straight from the flux
// definitions: upwind advective flux plus diffusive flux differences of the
// discrete Riesz potential, no-flux ends.
Eigen::VectorXd flux_apply(const Grid1D& g, const Velocity1D& vel, const KernelTable1D& table,
                           const Eigen::VectorXd& rho) {
    const int N = g.N;
    const Eigen::VectorXd I = apply_kernel_1d(table, rho);
    Eigen::VectorXd flux(N + 1);
    flux[0] = flux[N] = 0.0;
    for (int i = 0; i + 1 < N; ++i) {
        const double adv = upwind_flux(rho[i], rho[i + 1], vel.v[i]);
        const double dif = -(I[i + 1] - I[i]) / g.dx;
        flux[i + 1] = adv + dif;
    }
    Eigen::VectorXd out(N);
    for (int i = 0; i < N; ++i) out[i] = (flux[i + 1] - flux[i]) / g.dx;
    return out;
}

} // namespace

TEST_CASE("advection velocities") {
    const Grid1D g = build_grid_1d(2.0, 20);
    const Velocity1D v0 = advection_velocities(g, 0.0);
    for (int i = 0; i + 1 < g.N; ++i) CHECK(v0.v[i] == 0.0);

    const Velocity1D v1 = advection_velocities(g, 1.0);
    for (int i = 0; i + 1 < g.N; ++i) {
        const double midpoint = 0.5 * (g.center(i) + g.center(i + 1));
        CHECK(v1.v[i] == doctest::Approx(-midpoint).epsilon(1e-12));
        // odd symmetry on the symmetric grid
        CHECK(v1.v[i] == doctest::Approx(-v1.v[g.N - 2 - i]).epsilon(1e-12));
    }
    // the worked example: x_i = 1.0, x_{i+1} = 1.1, dx = 0.1
    const double v = -(0.5 * 1.1 * 1.1 - 0.5 * 1.0 * 1.0) / 0.1;
    CHECK(v == doctest::Approx(-1.05).epsilon(1e-12));
    CHECK_THROWS_AS(advection_velocities(g, -1.0), std::invalid_argument);
}

TEST_CASE("upwind flux branches") {
    CHECK(upwind_flux(2.0, 3.0, -1.05) == doctest::Approx(-3.15).epsilon(1e-15));
    CHECK(upwind_flux(2.0, 3.0, 0.0) == 0.0);
    CHECK(upwind_flux(2.0, 3.0, 1.05) == doctest::Approx(2.1).epsilon(1e-15));
}

TEST_CASE("minmod limiter") {
    CHECK(minmod(1.0, 2.0, 3.0) == 1.0);
    CHECK(minmod(-1.0, -2.0, -3.0) == -1.0);
    CHECK(minmod(-1.0, 2.0, 3.0) == 0.0);
    CHECK(minmod(0.0, 2.0, 3.0) == 0.0);
}

TEST_CASE("reconstruction") {
    const Grid1D g = build_grid_1d(1.0, 8);
    SUBCASE("constant field keeps its value") {
        const Field1D f{g, Eigen::VectorXd::Constant(8, 0.7)};
        const ReconstructedStates st = reconstruct_states(f);
        for (int i = 0; i < 8; ++i) {
            CHECK(st.east[i] == 0.7);
            CHECK(st.west[i] == 0.7);
        }
    }
    SUBCASE("linear field reconstructs interface values exactly") {
        const Field1D f = init_field(g, [](double x) { return x; });
        const ReconstructedStates st = reconstruct_states(f);
        for (int i = 1; i + 1 < 8; ++i) {
            CHECK(st.east[i] == doctest::Approx(g.center(i) + 0.5 * g.dx).epsilon(1e-14));
            CHECK(st.west[i] == doctest::Approx(g.center(i) - 0.5 * g.dx).epsilon(1e-14));
        }
        // boundary cells use slope zero
        CHECK(st.east[0] == f.values[0]);
        CHECK(st.west[7] == f.values[7]);
    }
    SUBCASE("extrema are clipped") {
        Field1D f = zero_field(g);
        f.values[3] = 1.0;
        const ReconstructedStates st = reconstruct_states(f);
        CHECK(st.east[3] == 1.0);
        CHECK(st.west[3] == 1.0);
    }
    SUBCASE("reconstructed values stay within the three-cell range") {
        const Field1D f{g, testsupport::random_vector(8, 1234u)};
        const ReconstructedStates st = reconstruct_states(f);
        for (int i = 1; i + 1 < 8; ++i) {
            const double lo = std::min({f.values[i - 1], f.values[i], f.values[i + 1]});
            const double hi = std::max({f.values[i - 1], f.values[i], f.values[i + 1]});
            CHECK(st.east[i] >= lo - 1e-14);
            CHECK(st.east[i] <= hi + 1e-14);
            CHECK(st.west[i] >= lo - 1e-14);
            CHECK(st.west[i] <= hi + 1e-14);
        }
    }
}

TEST_CASE("assembled operator matches the flux-difference oracle") {
    const Grid1D g = build_grid_1d(1.0, 4);
    const double alpha = 1.5, beta = 1.0;
    const KernelTable1D table = kernel_table_1d(g, alpha);
    const SchemeMatrices1D m = assemble_matrices(g, alpha, beta, table, 0.1);
    const Eigen::MatrixXd A = m.full_operator();
    const Velocity1D vel = advection_velocities(g, beta);
    double scale = A.cwiseAbs().maxCoeff();
    for (int j = 0; j < 4; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(4);
        e[j] = 1.0;
        const Eigen::VectorXd col = flux_apply(g, vel, table, e);
        for (int i = 0; i < 4; ++i) CHECK(A(i, j) == doctest::Approx(col[i]).epsilon(1e-12).scale(scale));
    }
}

TEST_CASE("matrix structure invariants") {
    const Grid1D g = build_grid_1d(5.0, 64);
    for (double alpha : {1.0 + 1e-11, 1.5, 1.9}) {
        for (double beta : {0.0, 1.0}) {
            const KernelTable1D table = kernel_table_1d(g, alpha);
            const SchemeMatrices1D m = assemble_matrices(g, alpha, beta, table, 0.05);
            const Eigen::MatrixXd A = m.full_operator();
            const double norm = A.cwiseAbs().maxCoeff();
            for (int j = 0; j < g.N; ++j) CHECK(std::abs(A.col(j).sum()) <= 1e-12 * norm);
            // L row sums vanish; printed end pattern
            const Eigen::MatrixXd L = m.laplacian();
            for (int i = 0; i < g.N; ++i) CHECK(L.row(i).sum() == doctest::Approx(0.0));
            CHECK(L(0, 0) == doctest::Approx(1.0 / (g.dx * g.dx)));
            CHECK(L(g.N - 1, g.N - 1) == doctest::Approx(1.0 / (g.dx * g.dx)));
            // D symmetric exactly
            const Eigen::MatrixXd D = m.kernel_matrix();
            CHECK((D - D.transpose()).cwiseAbs().maxCoeff() == 0.0);
            // beta = 0: A reduces to the diffusion part
            if (beta == 0.0)
                CHECK((A - m.diffusion_matrix()).cwiseAbs().maxCoeff() == 0.0);
        }
    }
    CHECK_THROWS_AS(assemble_matrices(g, 1.5, 1.0, kernel_table_1d(g, 1.5), 0.0),
                    std::invalid_argument);
}

TEST_CASE("implicit step conserves mass and fixes steady vectors") {
    const Grid1D g = build_grid_1d(5.0, 64);
    const double alpha = 1.4;
    const KernelTable1D table = kernel_table_1d(g, alpha);
    const SchemeMatrices1D m = assemble_matrices(g, alpha, 1.0, table, 0.1);

    Field1D f = init_field(g, [](double x) { return gaussian_steady(1, x) + 0.01; });
    const double m0 = mass(f);
    for (int k = 0; k < 50; ++k) {
        f = implicit_step(f, m);
        CHECK(std::abs(mass(f) - m0) <= 1e-10 * m0);
    }

    // a kernel vector of A is a fixed point of the step
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m.full_operator());
    REQUIRE(lu.dimensionOfKernel() >= 1);
    Eigen::VectorXd steady = lu.kernel().col(0);
    if (steady.sum() < 0.0) steady = -steady;
    const Field1D fs{g, steady};
    const Field1D fs1 = implicit_step(fs, m);
    CHECK((fs1.values - fs.values).cwiseAbs().maxCoeff() <=
          1e-11 * steady.cwiseAbs().maxCoeff());
}

TEST_CASE("implicit step agrees with explicit Euler to second order in dt") {
    const Grid1D g = build_grid_1d(3.0, 32);
    const double alpha = 1.6;
    const KernelTable1D table = kernel_table_1d(g, alpha);
    const Field1D f = init_field(g, [](double x) { return gaussian_steady(1, x); });
    auto one_step_gap = [&](double dt) {
        const SchemeMatrices1D m = assemble_matrices(g, alpha, 1.0, table, dt);
        const Field1D imp = implicit_step(f, m);
        const Eigen::VectorXd expl = f.values - dt * (m.full_operator() * f.values);
        return (imp.values - expl).cwiseAbs().maxCoeff();
    };
    const double g1 = one_step_gap(1e-3);
    const double g2 = one_step_gap(5e-4);
    CHECK(g1 / g2 == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("step is linear in the state") {
    const Grid1D g = build_grid_1d(2.0, 24);
    const KernelTable1D table = kernel_table_1d(g, 1.3);
    const SchemeMatrices1D m = assemble_matrices(g, 1.3, 1.0, table, 0.05);
    const Field1D f1{g, testsupport::random_vector(24, 7u)};
    const Field1D f2{g, testsupport::random_vector(24, 8u)};
    const double a = 1.3, b = -0.6;
    const Field1D fc{g, a * f1.values + b * f2.values};
    const Eigen::VectorXd want =
        a * implicit_step(f1, m).values + b * implicit_step(f2, m).values;
    const Eigen::VectorXd got = implicit_step(fc, m).values;
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("even symmetry is preserved") {
    const Grid1D g = build_grid_1d(4.0, 50);
    const KernelTable1D table = kernel_table_1d(g, 1.5);
    const SchemeMatrices1D m = assemble_matrices(g, 1.5, 1.0, table, 0.1);
    Field1D f = init_field(g, [](double x) { return gaussian_steady(1, x); });
    for (int k = 0; k < 20; ++k) f = implicit_step(f, m);
    for (int i = 0; i < g.N; ++i)
        CHECK(f.values[i] == doctest::Approx(f.values[g.N - 1 - i]).epsilon(1e-12));
}

TEST_CASE("imex minmod step") {
    const Grid1D g = build_grid_1d(5.0, 64);
    const KernelTable1D table = kernel_table_1d(g, 1.5);

    SUBCASE("beta = 0 reduces to the implicit step") {
        const SchemeMatrices1D m = assemble_matrices(g, 1.5, 0.0, table, 0.1);
        const Field1D f = init_field(g, [](double x) { return gaussian_steady(1, x); });
        const Field1D a = implicit_step(f, m);
        const Field1D b = imex_minmod_step(f, m);
        CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("zero state stays zero") {
        const SchemeMatrices1D m = assemble_matrices(g, 1.5, 1.0, table, 0.1);
        const Field1D z = imex_minmod_step(zero_field(g), m);
        CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("mass conservation and CFL diagnostic") {
        const SchemeMatrices1D m = assemble_matrices(g, 1.5, 1.0, table, 0.1);
        Field1D f = uniform_field(g);
        StepInfo info;
        const double m0 = mass(f);
        for (int k = 0; k < 50; ++k) {
            f = imex_minmod_step(f, m, &info);
            CHECK(std::abs(mass(f) - m0) <= 1e-10 * m0);
        }
        // max |v| = beta R = 5, dt/dx = 0.1/0.15625 -> CFL = 3.2: warn, not fail
        CHECK(info.cfl_warning);
        const SchemeMatrices1D msmall = assemble_matrices(g, 1.5, 1.0, table, 0.01);
        imex_minmod_step(uniform_field(g), msmall, &info);
        CHECK(!info.cfl_warning);
    }
}

TEST_CASE("matrix-based update equals the direct flux-loop update") {
    const Grid1D g = build_grid_1d(1.0, 4);
    const double alpha = 1.5, beta = 1.0, dt = 0.05;
    const KernelTable1D table = kernel_table_1d(g, alpha);
    const SchemeMatrices1D m = assemble_matrices(g, alpha, beta, table, dt);
    const Velocity1D vel = advection_velocities(g, beta);
    const Field1D f{g, testsupport::random_vector(4, 99u, 0.1, 1.0)};
    // implicit update: solve rho_new + dt * flux_apply(rho_new) = rho_old by
    // resubstituting the matrix-free operator inside a fixed-point refinement
    Field1D matrix_new = implicit_step(f, m);
    const Eigen::VectorXd residual =
        matrix_new.values + dt * flux_apply(g, vel, table, matrix_new.values) - f.values;
    CHECK(residual.cwiseAbs().maxCoeff() <= 1e-13 * f.values.cwiseAbs().maxCoeff());
}

TEST_CASE("run drivers") {
    const Grid1D g = build_grid_1d(5.0, 32);
    const KernelTable1D table = kernel_table_1d(g, 1.5);
    const SchemeMatrices1D m = assemble_matrices(g, 1.5, 1.0, table, 0.1);

    SUBCASE("t_final = 0 returns the input") {
        const Field1D f = uniform_field(g);
        const Field1D out = run(f, m, 0.0);
        CHECK((out.values - f.values).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("two runs are bit-identical") {
        const Field1D a = run(uniform_field(g), m, 2.0);
        const Field1D b = run(uniform_field(g), m, 2.0);
        CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("observer sees every step") {
        int count = 0;
        run(uniform_field(g), m, 1.0, 1, [&](double, const Field1D&) { ++count; });
        CHECK(count == 10);
    }
    SUBCASE("steady stopping honours both exits") {
        // from uniform datum, beta = 1 converges quickly
        const SteadyResult1D ok =
            run_to_steady(uniform_field(g), m, 1, SteadyOptions{1e-7, 200.0});
        CHECK(ok.converged);
        CHECK(ok.residual < 1e-7);
        // an already-steady datum stops after one step
        const SteadyResult1D again = run_to_steady(ok.state, m, 1, SteadyOptions{1e-7, 200.0});
        CHECK(again.converged);
        CHECK(again.steps == 1);
        // an unreachable tolerance reports t_max honestly
        const SteadyResult1D timeout =
            run_to_steady(uniform_field(g), m, 1, SteadyOptions{1e-30, 1.0});
        CHECK(!timeout.converged);
        CHECK(timeout.t >= 1.0);
    }
}

TEST_CASE("steady residual decreases after the transient") {
    const Grid1D g = build_grid_1d(5.0, 48);
    const KernelTable1D table = kernel_table_1d(g, 1.0 + 1e-11);
    const SchemeMatrices1D m = assemble_matrices(g, 1.0 + 1e-11, 1.0, table, 0.05);
    std::vector<double> residuals;
    DiagnosticsRecorder1D rec;
    const SteadyResult1D res = run_to_steady(uniform_field(g), m, 1, SteadyOptions{1e-9, 100.0},
                                             [&](double t, const Field1D& f) { rec(t, f); });
    CHECK(res.converged);
    const auto rows = rec.diagnostics().rows;
    for (std::size_t k = 5; k + 1 < rows.size(); ++k)
        CHECK(rows[k + 1].residual < rows[k].residual * 1.001);
}
