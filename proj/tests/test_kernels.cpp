#include <doctest.h>

#include <cmath>

#include <Eigen/Cholesky>

#include "fracfv/errors.hpp"
#include "fracfv/grid.hpp"
#include "fracfv/kernels.hpp"

#include "oracle_values.hpp"
#include "test_support.hpp"

using namespace fracfv;

TEST_CASE("gamma function against high-precision references") {
    CHECK(gamma_fn(0.5) == doctest::Approx(oracle::gamma_0_5).epsilon(1e-13));
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(gamma_fn(2.25) == doctest::Approx(oracle::gamma_2_25).epsilon(1e-13));
    CHECK(gamma_fn(-0.5) == doctest::Approx(oracle::gamma_m0_5).epsilon(1e-13));
    CHECK(gamma_fn(-5.5) == doctest::Approx(oracle::gamma_m5_5).epsilon(1e-12));
    CHECK(gamma_fn(10.3) == doctest::Approx(oracle::gamma_10_3).epsilon(1e-12));
    CHECK(gamma_fn(29.5) == doctest::Approx(oracle::gamma_29_5).epsilon(1e-12));
    CHECK(gamma_fn(-9.5) == doctest::Approx(oracle::gamma_m9_5).epsilon(1e-12));
}

TEST_CASE("gamma poles raise") {
    CHECK_THROWS_AS(gamma_fn(0.0), PoleError);
    CHECK_THROWS_AS(gamma_fn(-1.0), PoleError);
    CHECK_THROWS_AS(gamma_fn(-7.0), PoleError);
}

TEST_CASE("riesz constant values and poles") {
    CHECK(riesz_constant(1, -0.5) == doctest::Approx(oracle::riesz_1_m0_5).epsilon(1e-13));
    CHECK(riesz_constant(2, -1.0) == doctest::Approx(oracle::riesz_2_m1).epsilon(1e-13));
    CHECK(riesz_constant(1, -0.7) == doctest::Approx(oracle::riesz_1_m0_7).epsilon(1e-13));
    CHECK(riesz_constant(2, -1.5) == doctest::Approx(oracle::riesz_2_m1_5).epsilon(1e-13));
    CHECK(riesz_constant(2, -0.5) == doctest::Approx(oracle::riesz_2_m0_5).epsilon(1e-13));
    // alpha = 1 exactly in 1D: Gamma(0) pole
    CHECK_THROWS_AS(riesz_constant(1, -1.0), ConstantUndefined);
    // alpha = 2: pole in the denominator factor
    CHECK_THROWS_AS(riesz_constant(1, 0.0), ConstantUndefined);
    CHECK_THROWS_AS(riesz_constant(3, -0.5), std::invalid_argument);
}

TEST_CASE("pole-free prefactor matches the constant for moderate alpha") {
    for (double alpha : {1.05, 1.2, 1.5, 1.8, 1.95}) {
        const double via_constant = (alpha - 1.0) * riesz_constant(1, alpha - 2.0);
        CHECK(riesz_prefactor_1d(alpha) == doctest::Approx(via_constant).epsilon(1e-12));
    }
    CHECK(riesz_prefactor_1d(1.5) == doctest::Approx(0.5 * oracle::riesz_1_m0_5).epsilon(1e-13));
}

TEST_CASE("1d cell integrals against frozen quadrature oracles") {
    CHECK(cell_kernel_1d(1.5, 0.0, -0.05, 0.05) ==
          doctest::Approx(oracle::cell1d_a15_singular).epsilon(1e-13));
    CHECK(cell_kernel_1d(1.5, 0.0, 1.0, 2.0) ==
          doctest::Approx(oracle::cell1d_a15_far).epsilon(1e-13));
    CHECK(cell_kernel_1d(1.2, 0.3, 0.25, 0.35) ==
          doctest::Approx(oracle::cell1d_a12_interior).epsilon(1e-13));
    CHECK(cell_kernel_1d(1.8, -2.0, 3.0, 3.5) ==
          doctest::Approx(oracle::cell1d_a18_left).epsilon(1e-13));
    CHECK(cell_kernel_1d(1.0 + 1e-11, 0.0, -0.05, 0.05) ==
          doctest::Approx(oracle::cell1d_eps_singular).epsilon(1e-11));
}

TEST_CASE("1d cell integrals match the in-test adaptive quadrature") {
    for (double alpha : {1.2, 1.5, 1.9}) {
        for (auto [x, a, b] : {std::tuple{0.0, -0.05, 0.05}, std::tuple{0.31, 0.25, 0.35},
                               std::tuple{-1.0, 2.0, 2.5}, std::tuple{4.0, 1.0, 1.5},
                               std::tuple{0.25, 0.25, 0.35}}) {
            const double got = cell_kernel_1d(alpha, x, a, b);
            const double want = testsupport::oracle_cell_kernel_1d(alpha, x, a, b);
            CHECK(got == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("1d cell integral is translation invariant") {
    const double h = 0.05;
    for (double c : {0.5, -3.0, 17.25}) {
        const double at_origin = cell_kernel_1d(1.5, 0.0, -h, h);
        const double shifted = cell_kernel_1d(1.5, c, c - h, c + h);
        CHECK(shifted == doctest::Approx(at_origin).epsilon(5e-14));
    }
}

TEST_CASE("1d cell integral rejects bad input") {
    CHECK_THROWS_AS(cell_kernel_1d(1.5, 0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(cell_kernel_1d(1.0, 0.0, 0.0, 1.0), ConstantUndefined);
}

TEST_CASE("1d kernel table: offsets, symmetry, monotonicity") {
    const Grid1D g = build_grid_1d(1.0, 4);
    const KernelTable1D t = kernel_table_1d(g, 1.5);
    // reconstructed dense matrix is symmetric exactly and offset-indexed
    const Eigen::MatrixXd D = t.dense_matrix();
    CHECK((D - D.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) CHECK(D(i, k) == t[std::abs(i - k)]);
    // strictly decreasing positive entries
    for (int m = 0; m + 1 < 4; ++m) CHECK(t[m] > t[m + 1]);
    CHECK(t[3] > 0.0);
}

TEST_CASE("1d kernel table entries equal the cell integrals") {
    const Grid1D g = build_grid_1d(1.0, 2);
    const KernelTable1D t = kernel_table_1d(g, 1.5);
    CHECK(t[0] == doctest::Approx(oracle::table_r1n2_a15_k0).epsilon(1e-13));
    CHECK(t[1] == doctest::Approx(oracle::table_r1n2_a15_k1).epsilon(1e-13));

    const Grid1D g8 = build_grid_1d(2.5, 8);
    for (double alpha : {1.2, 1.7}) {
        const KernelTable1D t8 = kernel_table_1d(g8, alpha);
        for (int i = 0; i < 8; ++i) {
            for (int k = 0; k < 8; ++k) {
                const double a = g8.center(k) - 0.5 * g8.dx;
                const double b = g8.center(k) + 0.5 * g8.dx;
                const double direct = cell_kernel_1d(alpha, g8.center(i), a, b);
                CHECK(t8[std::abs(i - k)] == doctest::Approx(direct).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("1d kernel table near alpha = 1 keeps finite deviations") {
    const Grid1D g = build_grid_1d(20.0, 128);
    const KernelTable1D t = kernel_table_1d(g, 1.0 + 1e-11);
    CHECK(t.base() > 1e9); // the blow-up sits in the shared base
    for (int m = 0; m + 1 < t.size(); ++m) {
        CHECK(std::abs(t.deviation(m)) < 10.0);
        CHECK(t[m] > t[m + 1]);
    }
    CHECK(t[t.size() - 1] > 0.0);
}

TEST_CASE("dense kernel matrices admit a Cholesky factorisation") {
    for (double alpha : {1.1, 1.5, 1.9}) {
        const Grid1D g = build_grid_1d(3.0, 48);
        const Eigen::MatrixXd D = kernel_table_1d(g, alpha).dense_matrix();
        Eigen::LLT<Eigen::MatrixXd> llt(D);
        CHECK(llt.info() == Eigen::Success);
    }
    for (double alpha : {0.5, 1.0, 1.5}) {
        const Grid2D g = build_grid_2d(2.0, 8);
        const KernelTable2D t = kernel_table_2d(g, alpha);
        Eigen::MatrixXd D(64, 64);
        for (int j = 0; j < 8; ++j)
            for (int i = 0; i < 8; ++i)
                for (int l = 0; l < 8; ++l)
                    for (int k = 0; k < 8; ++k)
                        D(j * 8 + i, l * 8 + k) = t.entry(std::abs(i - k), std::abs(j - l));
        Eigen::LLT<Eigen::MatrixXd> llt(D);
        CHECK(llt.info() == Eigen::Success);
    }
}

TEST_CASE("2d cell integrals against frozen quadrature oracles") {
    CHECK(cell_kernel_2d(1.0, 0.0, 0.0, {0.5, 1.5, -0.5, 0.5}) ==
          doctest::Approx(oracle::cell2d_a1_off10).epsilon(1e-11));
    CHECK(cell_kernel_2d(1.0, 0.0, 0.0, {-0.5, 0.5, -0.5, 0.5}) ==
          doctest::Approx(oracle::cell2d_a1_sing).epsilon(1e-11));
    CHECK(cell_kernel_2d(0.5, 0.5, 0.0, {0.5, 1.5, -0.5, 0.5}) ==
          doctest::Approx(oracle::cell2d_a05_edge).epsilon(1e-10));
    CHECK(cell_kernel_2d(1.5, 0.0, 0.0, {1.5, 2.5, 0.5, 1.5}) ==
          doctest::Approx(oracle::cell2d_a15_off21).epsilon(1e-11));
    CHECK(cell_kernel_2d(1.5, 0.0, 0.0, {-0.05, 0.05, -0.05, 0.05}) ==
          doctest::Approx(oracle::cell2d_a15_sing_small).epsilon(1e-11));
    CHECK(cell_kernel_2d(0.5, 0.0, 0.0, {-0.5, 0.5, -0.5, 0.5}) ==
          doctest::Approx(oracle::cell2d_a05_sing).epsilon(1e-11));
}

TEST_CASE("2d singular cell equals four times its quarter") {
    const double h = 0.3;
    const double whole = cell_kernel_2d(1.0, 0.0, 0.0, {-h, h, -h, h});
    const double quarter = cell_kernel_2d(1.0, 0.0, 0.0, {0.0, h, 0.0, h});
    CHECK(whole == doctest::Approx(4.0 * quarter).epsilon(1e-11));
}

TEST_CASE("2d far cell approaches the point-kernel value") {
    const double alpha = 1.2;
    const double dx = 0.1, r = 10.0;
    const Rect cell{r - 0.5 * dx, r + 0.5 * dx, -0.5 * dx, 0.5 * dx};
    const double val = cell_kernel_2d(alpha, 0.0, 0.0, cell);
    const double point = riesz_constant(2, alpha - 2.0) * std::pow(r, -alpha) * dx * dx;
    CHECK(val == doctest::Approx(point).epsilon(5e-4)); // O((diam/r)^2)
}

TEST_CASE("2d cell integral error contract") {
    CHECK_THROWS_AS(cell_kernel_2d(1.0, 0.0, 0.0, {1.0, 1.0, 0.0, 1.0}), std::invalid_argument);
    try {
        cell_kernel_2d(1.0, 0.0, 0.0, {-0.5, 0.5, -0.5, 0.5}, 1e-18);
        FAIL("expected QuadratureFailure");
    } catch (const QuadratureFailure& e) {
        CHECK(e.achieved > 0.0);
        CHECK(e.achieved < 1e-9); // achieved estimate reported honestly
    }
}

TEST_CASE("2d kernel table symmetry and reconstruction") {
    const Grid2D g = build_grid_2d(1.0, 4);
    const double alpha = 1.2;
    const KernelTable2D t = kernel_table_2d(g, alpha);
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
            CHECK(t.entry(m, n) == t.entry(n, m));
            CHECK(t.entry(m, n) > 0.0);
            CHECK(std::isfinite(t.entry(m, n)));
        }
    // full I_{k,l}(x_i, y_j) reconstructed from offsets matches direct evaluation
    const double h = 0.5 * g.dx;
    for (int i = 0; i < 4; ++i)
        for (int j : {0, 3})
            for (int k = 0; k < 4; ++k)
                for (int l : {1, 2}) {
                    const Rect cell{g.center(k) - h, g.center(k) + h, g.center(l) - h,
                                    g.center(l) + h};
                    const double direct = cell_kernel_2d(alpha, g.center(i), g.center(j), cell);
                    CHECK(t.entry(std::abs(i - k), std::abs(j - l)) ==
                          doctest::Approx(direct).epsilon(1e-10));
                }
}

TEST_CASE("2d kernel table is independent of the thread count") {
    const Grid2D g = build_grid_2d(2.0, 12);
    const KernelTable2D t1 = kernel_table_2d(g, 0.8, 1);
    const KernelTable2D t4 = kernel_table_2d(g, 0.8, 4);
    CHECK((t1.offsets() - t4.offsets()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("2d table entries match the independent iterated quadrature") {
    const Grid2D g = build_grid_2d(1.0, 4);
    for (double alpha : {0.7, 1.4}) {
        const KernelTable2D t = kernel_table_2d(g, alpha);
        const double h = 0.5 * g.dx;
        for (int m : {0, 1, 3})
            for (int n : {0, 2}) {
                const Rect cell{m * g.dx - h, m * g.dx + h, n * g.dx - h, n * g.dx + h};
                const double want = testsupport::oracle_cell_kernel_2d(alpha, 0.0, 0.0, cell);
                CHECK(t.entry(m, n) == doctest::Approx(want).epsilon(1e-9));
            }
    }
}

TEST_CASE("kernel table cache round-trips bit-identically") {
    const auto dir = testsupport::temp_dir("cache");
    const Grid1D g1 = build_grid_1d(5.0, 32);
    const KernelTable1D t1 = kernel_table_1d(g1, 1.4);
    save_kernel_table(t1, dir / "t1.bin");
    const KernelTable1D r1 = load_kernel_table_1d(dir / "t1.bin");
    CHECK(r1.alpha() == t1.alpha());
    CHECK(r1.base() == t1.base());
    for (int m = 0; m < t1.size(); ++m) CHECK(r1.deviation(m) == t1.deviation(m));

    const Grid2D g2 = build_grid_2d(2.0, 6);
    const KernelTable2D t2 = kernel_table_2d(g2, 0.9);
    save_kernel_table(t2, dir / "t2.bin");
    const KernelTable2D r2 = load_kernel_table_2d(dir / "t2.bin");
    CHECK((r2.offsets() - t2.offsets()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(r2.R() == t2.R());

    CHECK_THROWS(load_kernel_table_2d(dir / "t1.bin")); // dimension mismatch
    std::filesystem::remove_all(dir);
}
