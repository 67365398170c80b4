#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace fracfv {

/// Uniform cell partition of (-R, R) into N cells of width dx = 2R/N.
/// Centers are mirrored about the origin so that x_i == -x_{N-1-i} exactly.
struct Grid1D {
    double R = 0.0;
    int N = 0;
    double dx = 0.0;
    std::vector<double> centers;

    double center(int i) const { return centers[static_cast<std::size_t>(i)]; }
    bool same_as(const Grid1D& other) const { return R == other.R && N == other.N; }
};

/// Uniform square partition of (-R, R)^2 into N x N cells, dx = dy = 2R/N.
/// Both axes share the same center coordinates.
struct Grid2D {
    double R = 0.0;
    int N = 0;
    double dx = 0.0;
    std::vector<double> centers;

    double center(int i) const { return centers[static_cast<std::size_t>(i)]; }
    bool same_as(const Grid2D& other) const { return R == other.R && N == other.N; }
};

Grid1D build_grid_1d(double R, int N);
Grid2D build_grid_2d(double R, int N);

/// Cell averages of a density on a Grid1D. Immutable after construction by convention.
struct Field1D {
    Grid1D grid;
    Eigen::VectorXd values;
};

/// Cell averages on a Grid2D, stored x-fastest: value(i,j) sits at index j*N + i.
struct Field2D {
    Grid2D grid;
    Eigen::VectorXd values;

    double operator()(int i, int j) const { return values[static_cast<Eigen::Index>(j) * grid.N + i]; }
    double& operator()(int i, int j) { return values[static_cast<Eigen::Index>(j) * grid.N + i]; }
};

/// Initialise cell averages by midpoint evaluation of `profile`.
Field1D init_field(const Grid1D& grid, const std::function<double(double)>& profile);
Field2D init_field(const Grid2D& grid, const std::function<double(double, double)>& profile);

/// Uniform distribution with unit mass; every cell holds exactly (2R)^{-d}.
Field1D uniform_field(const Grid1D& grid);
Field2D uniform_field(const Grid2D& grid);

Field1D zero_field(const Grid1D& grid);
Field2D zero_field(const Grid2D& grid);

double mass(const Field1D& f);
double mass(const Field2D& f);

} // namespace fracfv
