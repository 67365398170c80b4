#include <doctest.h>

#include <cmath>
#include <random>

#include "fracfv/errors.hpp"
#include "fracfv/grid.hpp"
#include "fracfv/reference.hpp"

#include "oracle_values.hpp"

using namespace fracfv;

TEST_CASE("grid 1d basic construction") {
    const Grid1D g = build_grid_1d(1.0, 4);
    CHECK(g.dx == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.center(0) == doctest::Approx(-0.75).epsilon(1e-15));
    CHECK(g.center(1) == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(g.center(2) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.center(3) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("grid spacing matches 2R/N") {
    const Grid1D g = build_grid_1d(100.0, 2000);
    CHECK(g.dx == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(std::abs(g.dx * g.N - 2.0 * g.R) <= 2.0 * g.R * 1e-15);
}

TEST_CASE("single-cell grid centers at the origin") {
    const Grid1D g = build_grid_1d(1.0, 1);
    CHECK(g.dx == 2.0);
    CHECK(g.center(0) == 0.0);
}

TEST_CASE("grid centers are exactly symmetric and increasing") {
    for (int N : {2, 7, 64, 613}) {
        const Grid1D g = build_grid_1d(3.7, N);
        for (int i = 0; i < N; ++i) CHECK(g.center(i) == -g.center(N - 1 - i));
        for (int i = 0; i + 1 < N; ++i) CHECK(g.center(i) < g.center(i + 1));
        CHECK(g.center(0) == doctest::Approx(-g.R + 0.5 * g.dx).epsilon(1e-15));
        CHECK(g.center(N - 1) == doctest::Approx(g.R - 0.5 * g.dx).epsilon(1e-15));
    }
}

TEST_CASE("grid rejects bad arguments") {
    CHECK_THROWS_AS(build_grid_1d(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_grid_1d(-1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_grid_1d(1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid_2d(1.0, -3), std::invalid_argument);
}

TEST_CASE("grid 2d spacing examples") {
    CHECK(build_grid_2d(20.0, 256).dx == doctest::Approx(0.15625).epsilon(1e-15));
    CHECK(build_grid_2d(20.0, 500).dx == doctest::Approx(0.08).epsilon(1e-14));
    const Grid2D g = build_grid_2d(1.0, 2);
    CHECK(g.center(0) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(g.center(1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("uniform field has exact value and unit mass") {
    const Grid1D g = build_grid_1d(50.0, 1000);
    const Field1D f = uniform_field(g);
    for (int i = 0; i < g.N; ++i) CHECK(f.values[i] == 0.01);
    CHECK(mass(f) == doctest::Approx(1.0).epsilon(1e-12));

    const Grid2D g2 = build_grid_2d(2.0, 40);
    CHECK(mass(uniform_field(g2)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero profile gives zero field and zero mass") {
    const Grid1D g = build_grid_1d(3.0, 17);
    const Field1D f = init_field(g, [](double) { return 0.0; });
    CHECK(mass(f) == 0.0);
}

TEST_CASE("init_field uses midpoint values") {
    // cells of width 0.1; the cell right of the origin is centred at 0.05
    const Grid1D g = build_grid_1d(100.0, 2000);
    const Field1D f = init_field(g, [](double x) { return heat_kernel_alpha1(1, 0.1, x); });
    CHECK(f.values[1000] == doctest::Approx(oracle::heat_mid_0_05).epsilon(1e-14));
    // midpoint value approximates the exact cell average to second order
    CHECK(f.values[1000] == doctest::Approx(oracle::heat_avg_cell_0_01).epsilon(0.02));

    // an odd grid puts a cell exactly at the origin
    const Grid1D godd = build_grid_1d(100.0, 2001);
    const Field1D fodd = init_field(godd, [](double x) { return heat_kernel_alpha1(1, 0.1, x); });
    CHECK(fodd.values[1000] == doctest::Approx(oracle::heat_mid_0).epsilon(1e-14));
    CHECK(fodd.values[1000] == doctest::Approx(oracle::heat_avg_center_n2001).epsilon(0.09));
}

TEST_CASE("init_field rejects non-finite data") {
    const Grid1D g = build_grid_1d(1.0, 8);
    CHECK_THROWS_AS(init_field(g, [](double x) { return 1.0 / (x - x); }), InvalidDatum);
}

TEST_CASE("init_field is linear in the profile") {
    const Grid1D g = build_grid_1d(2.0, 33);
    auto f1 = [](double x) { return std::sin(x) + 1.5; };
    auto f2 = [](double x) { return x * x; };
    const double a = 1.75, b = -0.4;
    const Field1D fa = init_field(g, f1);
    const Field1D fb = init_field(g, f2);
    const Field1D fc = init_field(g, [&](double x) { return a * f1(x) + b * f2(x); });
    for (int i = 0; i < g.N; ++i)
        CHECK(fc.values[i] == doctest::Approx(a * fa.values[i] + b * fb.values[i]).epsilon(1e-14));
}

TEST_CASE("2d field layout is x-fastest") {
    const Grid2D g = build_grid_2d(1.0, 3);
    Field2D f = zero_field(g);
    f(2, 1) = 7.0;
    CHECK(f.values[1 * 3 + 2] == 7.0);
    const Field2D h = init_field(g, [&](double x, double y) { return x + 10.0 * y; });
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            CHECK(h.values[j * 3 + i] == doctest::Approx(g.center(i) + 10.0 * g.center(j)));
}
