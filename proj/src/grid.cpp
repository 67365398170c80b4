#include "fracfv/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "fracfv/errors.hpp"

namespace fracfv {

namespace {

std::vector<double> mirrored_centers(double R, int N) {
    // x_i = -R + (i + 1/2) dx evaluated as (2i + 1 - N) * (R/N): exact integer
    // scaling keeps the centers antisymmetric bitwise and avoids cancellation
    // near the origin.
    const double half_dx = R / N;
    std::vector<double> c(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i)
        c[static_cast<std::size_t>(i)] = static_cast<double>(2 * i + 1 - N) * half_dx;
    return c;
}

} // namespace

Grid1D build_grid_1d(double R, int N) {
    if (!(R > 0.0)) throw std::invalid_argument("build_grid_1d: R must be positive");
    if (N < 1) throw std::invalid_argument("build_grid_1d: N must be a positive integer");
    Grid1D g;
    g.R = R;
    g.N = N;
    g.dx = 2.0 * R / N;
    g.centers = mirrored_centers(R, N);
    return g;
}

Grid2D build_grid_2d(double R, int N) {
    if (!(R > 0.0)) throw std::invalid_argument("build_grid_2d: R must be positive");
    if (N < 1) throw std::invalid_argument("build_grid_2d: N must be a positive integer");
    Grid2D g;
    g.R = R;
    g.N = N;
    g.dx = 2.0 * R / N;
    g.centers = mirrored_centers(R, N);
    return g;
}

Field1D init_field(const Grid1D& grid, const std::function<double(double)>& profile) {
    Field1D f{grid, Eigen::VectorXd(grid.N)};
    for (int i = 0; i < grid.N; ++i) {
        const double v = profile(grid.center(i));
        if (!std::isfinite(v)) throw InvalidDatum("init_field: profile returned a non-finite value");
        f.values[i] = v;
    }
    return f;
}

Field2D init_field(const Grid2D& grid, const std::function<double(double, double)>& profile) {
    Field2D f{grid, Eigen::VectorXd(static_cast<Eigen::Index>(grid.N) * grid.N)};
    for (int j = 0; j < grid.N; ++j) {
        for (int i = 0; i < grid.N; ++i) {
            const double v = profile(grid.center(i), grid.center(j));
            if (!std::isfinite(v)) throw InvalidDatum("init_field: profile returned a non-finite value");
            f(i, j) = v;
        }
    }
    return f;
}

Field1D uniform_field(const Grid1D& grid) {
    const double v = 1.0 / (2.0 * grid.R);
    return Field1D{grid, Eigen::VectorXd::Constant(grid.N, v)};
}

Field2D uniform_field(const Grid2D& grid) {
    const double v = 1.0 / (4.0 * grid.R * grid.R);
    return Field2D{grid, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(grid.N) * grid.N, v)};
}

Field1D zero_field(const Grid1D& grid) {
    return Field1D{grid, Eigen::VectorXd::Zero(grid.N)};
}

Field2D zero_field(const Grid2D& grid) {
    return Field2D{grid, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.N) * grid.N)};
}

double mass(const Field1D& f) { return f.values.sum() * f.grid.dx; }

double mass(const Field2D& f) { return f.values.sum() * f.grid.dx * f.grid.dx; }

} // namespace fracfv
