#include "fracfv/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "fracfv/errors.hpp"
#include "fracfv/quadrature.hpp"
#include "fracfv/threading.hpp"

namespace fracfv {

namespace {

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

// (t^{-e} - 1) / e, the deviation of the kernel from its alpha -> 1 limit,
// scaled so that it stays O(log t) as e -> 0.
double power_deviation(double e, double t) {
    return std::expm1(-e * std::log(t)) / e;
}

// Antiderivative of power_deviation from 0 to t (the integrable endpoint).
double power_deviation_primitive(double e, double t) {
    if (t == 0.0) return 0.0;
    return t * (power_deviation(e, t) + 1.0) / (1.0 - e);
}

} // namespace

double gamma_fn(double x) {
    if (is_nonpositive_integer(x))
        throw PoleError("gamma_fn: pole at non-positive integer " + std::to_string(x));
    return std::tgamma(x);
}

double riesz_constant(int d, double g) {
    if (d != 1 && d != 2) throw std::invalid_argument("riesz_constant: d must be 1 or 2");
    const double num_arg = 0.5 * (d + g);
    const double den_arg = -0.5 * g;
    if (is_nonpositive_integer(num_arg) || is_nonpositive_integer(den_arg))
        throw ConstantUndefined("riesz_constant: gamma pole at d=" + std::to_string(d) +
                                ", g=" + std::to_string(g));
    return std::pow(2.0, g) * std::tgamma(num_arg) /
           (std::pow(M_PI, 0.5 * d) * std::abs(std::tgamma(den_arg)));
}

double riesz_prefactor_1d(double alpha) {
    const double e = alpha - 1.0; // in (0, 1)
    if (!(e > 0.0 && e < 1.0))
        throw ConstantUndefined("riesz_prefactor_1d: alpha must lie in (1, 2)");
    // (alpha-1) * C(1, alpha-2) with the epsilon pole of Gamma(e/2) removed:
    // e * Gamma(e/2) = 2 * Gamma(1 + e/2).
    return std::pow(2.0, e) * std::tgamma(1.0 + 0.5 * e) /
           (std::sqrt(M_PI) * std::tgamma(0.5 * (1.0 - e)));
}

double cell_kernel_1d(double alpha, double x, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("cell_kernel_1d: requires a < b");
    if (!(alpha > 1.0 && alpha < 2.0))
        throw ConstantUndefined("cell_kernel_1d: alpha must lie in (1, 2)");
    const double e = alpha - 1.0;
    const double G = riesz_prefactor_1d(alpha);
    double dev;
    if (x <= a) {
        dev = power_deviation_primitive(e, b - x) - power_deviation_primitive(e, a - x);
    } else if (x >= b) {
        dev = power_deviation_primitive(e, x - a) - power_deviation_primitive(e, x - b);
    } else {
        dev = power_deviation_primitive(e, x - a) + power_deviation_primitive(e, b - x);
    }
    return G * ((b - a) / e + dev);
}

Eigen::MatrixXd KernelTable1D::dense_matrix() const {
    Eigen::MatrixXd D(N_, N_);
    for (int i = 0; i < N_; ++i)
        for (int k = 0; k < N_; ++k) D(i, k) = entry(std::abs(i - k));
    return D;
}

KernelTable1D kernel_table_1d(const Grid1D& grid, double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw ConstantUndefined("kernel_table_1d: alpha must lie in (1, 2)");
    const double e = alpha - 1.0;
    const double G = riesz_prefactor_1d(alpha);
    const double dx = grid.dx;
    const double h = 0.5 * dx;
    const double base = G * dx / e;
    std::vector<double> dev(static_cast<std::size_t>(grid.N));
    dev[0] = G * 2.0 * power_deviation_primitive(e, h);
    for (int m = 1; m < grid.N; ++m) {
        const double r = m * dx;
        dev[static_cast<std::size_t>(m)] =
            G * (power_deviation_primitive(e, r + h) - power_deviation_primitive(e, r - h));
    }
    return KernelTable1D(alpha, grid.R, grid.N, dx, base, std::move(dev));
}

// ---------------------------------------------------------------------------
// 2D cell integrals
// ---------------------------------------------------------------------------

namespace {

// int over [0,w] x [0,h] of (x^2 + y^2)^{-alpha/2}, singularity at the origin
// corner. Splitting along the diagonal and integrating the radial factor
// exactly leaves two smooth 1D profiles.
double corner_rectangle_integral(double alpha, double w, double h, int gl_order) {
    if (w <= 0.0 || h <= 0.0) return 0.0;
    auto profile = [&](double p, double q) {
        // int_0^1 (p^2 + s^2 q^2)^{-alpha/2} ds
        return gl_integrate(
            [&](double s) { return std::pow(p * p + s * s * q * q, -0.5 * alpha); }, 0.0, 1.0,
            gl_order);
    };
    return (w * h / (2.0 - alpha)) * (profile(w, h) + profile(h, w));
}

struct BoxQuad {
    double value = 0.0;
    double error = 0.0; // estimate from comparing two GL orders
};

double tensor_gl(double alpha, double px, double py, const Rect& r, int n) {
    const GaussLegendre& rule = gauss_legendre(n);
    const double mx = 0.5 * (r.ax + r.bx), hx = 0.5 * (r.bx - r.ax);
    const double my = 0.5 * (r.ay + r.by), hy = 0.5 * (r.by - r.ay);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = mx + hx * rule.nodes[i] - px;
        double row = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double v = my + hy * rule.nodes[j] - py;
            row += rule.weights[j] * std::pow(u * u + v * v, -0.5 * alpha);
        }
        sum += rule.weights[i] * row;
    }
    return sum * hx * hy;
}

// Distance-graded subdivision: boxes far from the singular point get a fixed
// tensor rule; near boxes are quartered until the rule applies.
void graded_box(double alpha, double px, double py, const Rect& r, int gl_order, int depth,
                BoxQuad& acc) {
    const double cx = 0.5 * (r.ax + r.bx), cy = 0.5 * (r.ay + r.by);
    const double wx = r.bx - r.ax, wy = r.by - r.ay;
    const double diam = std::hypot(wx, wy);
    const double dist = std::hypot(cx - px, cy - py);
    if (dist > 2.0 * diam || depth >= 28) {
        const double v1 = tensor_gl(alpha, px, py, r, gl_order);
        const double v0 = tensor_gl(alpha, px, py, r, gl_order - 6);
        acc.value += v1;
        acc.error += std::abs(v1 - v0);
        return;
    }
    const Rect quads[4] = {{r.ax, cx, r.ay, cy}, {cx, r.bx, r.ay, cy},
                           {r.ax, cx, cy, r.by}, {cx, r.bx, cy, r.by}};
    for (const Rect& q : quads) graded_box(alpha, px, py, q, gl_order, depth + 1, acc);
}

double cell_kernel_2d_unscaled(double alpha, double px, double py, const Rect& cell,
                               int gl_order, double* error_estimate) {
    BoxQuad acc;
    const bool inside_x = (px >= cell.ax && px <= cell.bx);
    const bool inside_y = (py >= cell.ay && py <= cell.by);
    if (inside_x && inside_y) {
        // Corner split at the singular point; degenerate strips vanish.
        acc.value += corner_rectangle_integral(alpha, px - cell.ax, py - cell.ay, 2 * gl_order);
        acc.value += corner_rectangle_integral(alpha, cell.bx - px, py - cell.ay, 2 * gl_order);
        acc.value += corner_rectangle_integral(alpha, px - cell.ax, cell.by - py, 2 * gl_order);
        acc.value += corner_rectangle_integral(alpha, cell.bx - px, cell.by - py, 2 * gl_order);
        // Error estimate from a lower-order evaluation of the same split.
        double lo = 0.0;
        lo += corner_rectangle_integral(alpha, px - cell.ax, py - cell.ay, gl_order);
        lo += corner_rectangle_integral(alpha, cell.bx - px, py - cell.ay, gl_order);
        lo += corner_rectangle_integral(alpha, px - cell.ax, cell.by - py, gl_order);
        lo += corner_rectangle_integral(alpha, cell.bx - px, cell.by - py, gl_order);
        acc.error += std::abs(acc.value - lo);
    } else {
        graded_box(alpha, px, py, cell, gl_order, 0, acc);
    }
    if (error_estimate) *error_estimate = acc.error;
    return acc.value;
}

} // namespace

double cell_kernel_2d(double alpha, double px, double py, const Rect& cell, double rel_tol) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("cell_kernel_2d: alpha must lie in (0, 2)");
    if (!(cell.ax < cell.bx && cell.ay < cell.by))
        throw std::invalid_argument("cell_kernel_2d: degenerate cell");
    const double C2 = riesz_constant(2, alpha - 2.0);
    double err = 0.0;
    double val = cell_kernel_2d_unscaled(alpha, px, py, cell, 20, &err);
    if (err > rel_tol * std::abs(val)) {
        // One retry at sharply higher order before reporting failure.
        double err2 = 0.0;
        const double val2 = cell_kernel_2d_unscaled(alpha, px, py, cell, 34, &err2);
        if (err2 > rel_tol * std::abs(val2))
            throw QuadratureFailure("cell_kernel_2d: accuracy target unreachable",
                                    err2 / std::max(std::abs(val2), 1e-300));
        val = val2;
    }
    return C2 * val;
}

KernelTable2D kernel_table_2d(const Grid2D& grid, double alpha, int threads) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("kernel_table_2d: alpha must lie in (0, 2)");
    const double C2 = riesz_constant(2, alpha - 2.0);
    const int N = grid.N;
    const double dx = grid.dx;
    const double h = 0.5 * dx;
    Eigen::MatrixXd K(N, N);
    parallel_for(0, N, threads, [&](int m0, int m1) {
        for (int m = m0; m < m1; ++m) {
            for (int n = m; n < N; ++n) {
                const Rect cell{m * dx - h, m * dx + h, n * dx - h, n * dx + h};
                K(m, n) = C2 * cell_kernel_2d_unscaled(alpha, 0.0, 0.0, cell, 20, nullptr);
            }
        }
    });
    for (int m = 0; m < N; ++m)
        for (int n = 0; n < m; ++n) K(m, n) = K(n, m);
    return KernelTable2D(alpha, grid.R, N, dx, std::move(K));
}

// ---------------------------------------------------------------------------
// Binary table cache
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint32_t kMagic = 0x46564b54; // "TKVF"

struct CacheHeader {
    std::uint32_t magic;
    std::uint32_t version;
    std::uint32_t dimension;
    std::uint32_t n;
    double alpha;
    double R;
    double dx;
};

void write_header(std::ofstream& out, std::uint32_t dim, double alpha, double R, double dx,
                  std::uint32_t n) {
    CacheHeader hd{kMagic, kKernelQuadratureVersion, dim, n, alpha, R, dx};
    out.write(reinterpret_cast<const char*>(&hd), sizeof(hd));
}

CacheHeader read_header(std::ifstream& in, std::uint32_t expected_dim,
                        const std::filesystem::path& path) {
    CacheHeader hd{};
    in.read(reinterpret_cast<char*>(&hd), sizeof(hd));
    if (!in || hd.magic != kMagic)
        throw std::runtime_error("kernel table cache: bad file " + path.string());
    if (hd.version != kKernelQuadratureVersion)
        throw std::runtime_error("kernel table cache: version mismatch in " + path.string());
    if (hd.dimension != expected_dim)
        throw std::runtime_error("kernel table cache: dimension mismatch in " + path.string());
    return hd;
}

} // namespace

void save_kernel_table(const KernelTable1D& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_header(out, 1, table.alpha(), table.R(), table.dx(),
                 static_cast<std::uint32_t>(table.size()));
    const double base = table.base();
    out.write(reinterpret_cast<const char*>(&base), sizeof(double));
    for (int m = 0; m < table.size(); ++m) {
        const double d = table.deviation(m);
        out.write(reinterpret_cast<const char*>(&d), sizeof(double));
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void save_kernel_table(const KernelTable2D& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_header(out, 2, table.alpha(), table.R(), table.dx(),
                 static_cast<std::uint32_t>(table.size()));
    out.write(reinterpret_cast<const char*>(table.offsets().data()),
              static_cast<std::streamsize>(sizeof(double)) * table.size() * table.size());
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

KernelTable1D load_kernel_table_1d(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    const CacheHeader hd = read_header(in, 1, path);
    double base = 0.0;
    in.read(reinterpret_cast<char*>(&base), sizeof(double));
    std::vector<double> dev(hd.n);
    in.read(reinterpret_cast<char*>(dev.data()), static_cast<std::streamsize>(sizeof(double)) * hd.n);
    if (!in) throw std::runtime_error("truncated kernel table cache: " + path.string());
    return KernelTable1D(hd.alpha, hd.R, static_cast<int>(hd.n), hd.dx, base, std::move(dev));
}

KernelTable2D load_kernel_table_2d(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    const CacheHeader hd = read_header(in, 2, path);
    Eigen::MatrixXd K(hd.n, hd.n);
    in.read(reinterpret_cast<char*>(K.data()),
            static_cast<std::streamsize>(sizeof(double)) * hd.n * hd.n);
    if (!in) throw std::runtime_error("truncated kernel table cache: " + path.string());
    return KernelTable2D(hd.alpha, hd.R, static_cast<int>(hd.n), hd.dx, std::move(K));
}

Eigen::VectorXd apply_kernel_1d(const KernelTable1D& table, const Eigen::VectorXd& rho) {
    const int N = table.size();
    if (rho.size() != N) throw GridMismatch("apply_kernel_1d: size mismatch");
    Eigen::VectorXd out(N);
    for (int i = 0; i < N; ++i) {
        double s = 0.0;
        for (int k = 0; k < N; ++k) s += rho[k] * table.entry(std::abs(i - k));
        out[i] = s;
    }
    return out;
}

Eigen::VectorXd apply_kernel_2d_direct(const KernelTable2D& table, const Eigen::VectorXd& rho) {
    const int N = table.size();
    if (rho.size() != static_cast<Eigen::Index>(N) * N)
        throw GridMismatch("apply_kernel_2d_direct: size mismatch");
    Eigen::VectorXd out(static_cast<Eigen::Index>(N) * N);
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < N; ++i) {
            double s = 0.0;
            for (int l = 0; l < N; ++l) {
                const int dj = std::abs(j - l);
                for (int k = 0; k < N; ++k)
                    s += rho[static_cast<Eigen::Index>(l) * N + k] * table.entry(std::abs(i - k), dj);
            }
            out[static_cast<Eigen::Index>(j) * N + i] = s;
        }
    }
    return out;
}

} // namespace fracfv
