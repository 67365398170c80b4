#include "fracfv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracfv/errors.hpp"

namespace fracfv {

namespace {

double finish_lp(double acc, int p) { return (p == 1) ? acc : std::sqrt(acc); }

void check_p(int p) {
    if (p != 1 && p != 2) throw std::invalid_argument("lp_distance: p must be 1 or 2");
}

double pw(double d, int p) { return (p == 1) ? std::abs(d) : d * d; }

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    if (den == 0.0) throw std::invalid_argument("slope fit: degenerate abscissae");
    return num / den;
}

} // namespace

double lp_distance(const Field1D& f, const Field1D& ref, int p, std::optional<Box1D> window) {
    check_p(p);
    if (!f.grid.same_as(ref.grid)) throw GridMismatch("lp_distance: fields on different grids");
    double acc = 0.0;
    for (int i = 0; i < f.grid.N; ++i) {
        if (window && !window->contains(f.grid.center(i))) continue;
        acc += pw(f.values[i] - ref.values[i], p) * f.grid.dx;
    }
    return finish_lp(acc, p);
}

double lp_distance(const Field1D& f, const std::function<double(double)>& ref, int p,
                   std::optional<Box1D> window) {
    check_p(p);
    double acc = 0.0;
    for (int i = 0; i < f.grid.N; ++i) {
        const double x = f.grid.center(i);
        if (window && !window->contains(x)) continue;
        acc += pw(f.values[i] - ref(x), p) * f.grid.dx;
    }
    return finish_lp(acc, p);
}

double lp_distance(const Field2D& f, const Field2D& ref, int p, std::optional<Box2D> window) {
    check_p(p);
    if (!f.grid.same_as(ref.grid)) throw GridMismatch("lp_distance: fields on different grids");
    const double cell = f.grid.dx * f.grid.dx;
    double acc = 0.0;
    for (int j = 0; j < f.grid.N; ++j)
        for (int i = 0; i < f.grid.N; ++i) {
            if (window && !window->contains(f.grid.center(i), f.grid.center(j))) continue;
            acc += pw(f(i, j) - ref(i, j), p) * cell;
        }
    return finish_lp(acc, p);
}

double lp_distance(const Field2D& f, const std::function<double(double, double)>& ref, int p,
                   std::optional<Box2D> window) {
    check_p(p);
    const double cell = f.grid.dx * f.grid.dx;
    double acc = 0.0;
    for (int j = 0; j < f.grid.N; ++j)
        for (int i = 0; i < f.grid.N; ++i) {
            const double x = f.grid.center(i), y = f.grid.center(j);
            if (window && !window->contains(x, y)) continue;
            acc += pw(f(i, j) - ref(x, y), p) * cell;
        }
    return finish_lp(acc, p);
}

double lp_norm(const Field1D& f, int p, std::optional<Box1D> window) {
    return lp_distance(
        f, [](double) { return 0.0; }, p, window);
}

double lp_norm(const Field2D& f, int p, std::optional<Box2D> window) {
    return lp_distance(
        f, [](double, double) { return 0.0; }, p, window);
}

double lp_distance_nested(const Field1D& coarse, const Field1D& fine, int p) {
    check_p(p);
    if (fine.grid.N != 2 * coarse.grid.N || fine.grid.R != coarse.grid.R)
        throw GridMismatch("lp_distance_nested: fine grid must halve the coarse one");
    double acc = 0.0;
    for (int i = 0; i < fine.grid.N; ++i)
        acc += pw(fine.values[i] - coarse.values[i / 2], p) * fine.grid.dx;
    return finish_lp(acc, p);
}

double lp_distance_nested(const Field2D& coarse, const Field2D& fine, int p) {
    check_p(p);
    if (fine.grid.N != 2 * coarse.grid.N || fine.grid.R != coarse.grid.R)
        throw GridMismatch("lp_distance_nested: fine grid must halve the coarse one");
    const double cell = fine.grid.dx * fine.grid.dx;
    double acc = 0.0;
    for (int j = 0; j < fine.grid.N; ++j)
        for (int i = 0; i < fine.grid.N; ++i)
            acc += pw(fine(i, j) - coarse(i / 2, j / 2), p) * cell;
    return finish_lp(acc, p);
}

ConvergenceFit convergence_order(const std::vector<double>& errors,
                                 const std::vector<double>& spacings) {
    if (errors.size() < 2 || errors.size() != spacings.size())
        throw std::invalid_argument("convergence_order: need >= 2 matching (error, spacing) pairs");
    ConvergenceFit fit;
    bool degenerate = false;
    for (double e : errors)
        if (!(e > 0.0)) degenerate = true;
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        if (errors[k + 1] > 0.0 && errors[k] > 0.0)
            fit.pairwise.push_back(std::log2(errors[k] / errors[k + 1]));
        else
            fit.pairwise.push_back(std::numeric_limits<double>::infinity());
    }
    if (degenerate) {
        fit.slope = std::numeric_limits<double>::infinity();
        return fit;
    }
    std::vector<double> lx(errors.size()), ly(errors.size());
    for (std::size_t k = 0; k < errors.size(); ++k) {
        if (!(spacings[k] > 0.0))
            throw std::invalid_argument("convergence_order: spacings must be positive");
        lx[k] = std::log(spacings[k]);
        ly[k] = std::log(errors[k]);
    }
    fit.slope = ls_slope(lx, ly);
    return fit;
}

namespace {

double entropy_phi(double r, EntropyKind kind) {
    if (kind == EntropyKind::Quadratic) return (r - 1.0) * (r - 1.0);
    if (r == 0.0) return 1.0; // limit of r(log r - 1) + 1
    return r * (std::log(r) - 1.0) + 1.0;
}

template <typename CellIter>
double entropy_sum(CellIter&& cells, EntropyKind kind, double cell_measure) {
    double acc = 0.0;
    cells([&](double rho, double steady) {
        if (rho < 0.0) throw InvalidState("relative_entropy: negative density");
        if (!(steady > 0.0)) throw InvalidState("relative_entropy: steady state must be positive");
        acc += entropy_phi(rho / steady, kind) * steady * cell_measure;
    });
    return acc;
}

} // namespace

double relative_entropy(const Field1D& f, const std::function<double(double)>& steady,
                        EntropyKind kind) {
    return entropy_sum(
        [&](auto&& emit) {
            for (int i = 0; i < f.grid.N; ++i) emit(f.values[i], steady(f.grid.center(i)));
        },
        kind, f.grid.dx);
}

double relative_entropy(const Field1D& f, const Field1D& steady, EntropyKind kind) {
    if (!f.grid.same_as(steady.grid)) throw GridMismatch("relative_entropy: grid mismatch");
    return entropy_sum(
        [&](auto&& emit) {
            for (int i = 0; i < f.grid.N; ++i) emit(f.values[i], steady.values[i]);
        },
        kind, f.grid.dx);
}

double relative_entropy(const Field2D& f, const std::function<double(double, double)>& steady,
                        EntropyKind kind) {
    return entropy_sum(
        [&](auto&& emit) {
            for (int j = 0; j < f.grid.N; ++j)
                for (int i = 0; i < f.grid.N; ++i)
                    emit(f(i, j), steady(f.grid.center(i), f.grid.center(j)));
        },
        kind, f.grid.dx * f.grid.dx);
}

double relative_entropy(const Field2D& f, const Field2D& steady, EntropyKind kind) {
    if (!f.grid.same_as(steady.grid)) throw GridMismatch("relative_entropy: grid mismatch");
    return entropy_sum(
        [&](auto&& emit) {
            for (Eigen::Index k = 0; k < f.values.size(); ++k)
                emit(f.values[k], steady.values[k]);
        },
        kind, f.grid.dx * f.grid.dx);
}

double decay_rate_fit(const std::vector<double>& times, const std::vector<double>& values,
                      Interval window) {
    if (times.size() != values.size())
        throw std::invalid_argument("decay_rate_fit: times/values size mismatch");
    std::vector<double> x, y;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < window.lo || times[k] > window.hi) continue;
        if (!(values[k] > 0.0))
            throw std::invalid_argument("decay_rate_fit: values must be positive in the window");
        x.push_back(times[k]);
        y.push_back(std::log(values[k]));
    }
    if (x.size() < 2) throw std::invalid_argument("decay_rate_fit: window contains < 2 samples");
    return ls_slope(x, y);
}

double tail_exponent_fit(const Field1D& f, Interval radius_window) {
    if (!(radius_window.lo > 0.0) || radius_window.hi <= radius_window.lo ||
        radius_window.hi > f.grid.R)
        throw std::invalid_argument("tail_exponent_fit: window must satisfy 0 < lo < hi <= R");
    std::vector<double> x, y;
    for (int i = 0; i < f.grid.N; ++i) {
        const double r = std::abs(f.grid.center(i));
        if (r < radius_window.lo || r > radius_window.hi) continue;
        if (!(f.values[i] > 0.0))
            throw InvalidState("tail_exponent_fit: non-positive density in the window");
        x.push_back(std::log(r));
        y.push_back(std::log(f.values[i]));
    }
    if (x.size() < 2) throw std::invalid_argument("tail_exponent_fit: window contains < 2 cells");
    return ls_slope(x, y);
}

double tail_exponent_fit(const Field2D& f, Interval radius_window, int bins) {
    if (!(radius_window.lo > 0.0) || radius_window.hi <= radius_window.lo ||
        radius_window.hi > f.grid.R)
        throw std::invalid_argument("tail_exponent_fit: window must satisfy 0 < lo < hi <= R");
    if (bins < 3) throw std::invalid_argument("tail_exponent_fit: need >= 3 bins");
    const double llo = std::log(radius_window.lo), lhi = std::log(radius_window.hi);
    std::vector<double> sum(static_cast<std::size_t>(bins), 0.0);
    std::vector<int> count(static_cast<std::size_t>(bins), 0);
    for (int j = 0; j < f.grid.N; ++j)
        for (int i = 0; i < f.grid.N; ++i) {
            const double r = std::hypot(f.grid.center(i), f.grid.center(j));
            if (r < radius_window.lo || r > radius_window.hi) continue;
            if (!(f(i, j) > 0.0))
                throw InvalidState("tail_exponent_fit: non-positive density in the window");
            int b = static_cast<int>((std::log(r) - llo) / (lhi - llo) * bins);
            b = std::clamp(b, 0, bins - 1);
            sum[static_cast<std::size_t>(b)] += f(i, j);
            count[static_cast<std::size_t>(b)] += 1;
        }
    std::vector<double> x, y;
    for (int b = 0; b < bins; ++b) {
        if (count[static_cast<std::size_t>(b)] == 0) continue;
        const double rmid = std::exp(llo + (b + 0.5) * (lhi - llo) / bins);
        x.push_back(std::log(rmid));
        y.push_back(std::log(sum[static_cast<std::size_t>(b)] / count[static_cast<std::size_t>(b)]));
    }
    if (x.size() < 3) throw std::invalid_argument("tail_exponent_fit: too few occupied bins");
    return ls_slope(x, y);
}

namespace {

double flatness_of(const std::vector<double>& vals) {
    if (vals.empty()) throw std::invalid_argument("riesz_flatness: empty interior");
    double mn = vals[0], mx = vals[0], mean = 0.0;
    for (double v : vals) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
        mean += v;
    }
    mean /= static_cast<double>(vals.size());
    if (mean == 0.0) throw std::invalid_argument("riesz_flatness: degenerate zero mean");
    return (mx - mn) / std::abs(mean);
}

} // namespace

double riesz_flatness(const Field1D& f, const KernelTable1D& table, double interior_fraction) {
    if (!table.matches(f.grid)) throw GridMismatch("riesz_flatness: table/grid mismatch");
    const Eigen::VectorXd I = apply_kernel_1d(table, f.values);
    std::vector<double> inner;
    for (int i = 0; i < f.grid.N; ++i)
        if (std::abs(f.grid.center(i)) <= interior_fraction * f.grid.R) inner.push_back(I[i]);
    return flatness_of(inner);
}

double riesz_flatness(const Field2D& f, const KernelTable2D& table, double interior_fraction) {
    if (!table.matches(f.grid)) throw GridMismatch("riesz_flatness: table/grid mismatch");
    Eigen::VectorXd I;
    if (f.grid.N <= 48) {
        I = apply_kernel_2d_direct(table, f.values);
    } else {
        KernelConvolver2D conv(table);
        I = conv.apply(f.values);
    }
    std::vector<double> inner;
    const double lim = interior_fraction * f.grid.R;
    for (int j = 0; j < f.grid.N; ++j)
        for (int i = 0; i < f.grid.N; ++i)
            if (std::abs(f.grid.center(i)) <= lim && std::abs(f.grid.center(j)) <= lim)
                inner.push_back(I[static_cast<Eigen::Index>(j) * f.grid.N + i]);
    return flatness_of(inner);
}

std::vector<double> Diagnostics::times() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.t);
    return out;
}

std::vector<double> Diagnostics::column(double DiagnosticsRow::*member) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.*member);
    return out;
}

DiagnosticsRecorder1D::DiagnosticsRecorder1D(std::function<double(double)> reference)
    : ref_(std::move(reference)) {}

void DiagnosticsRecorder1D::operator()(double t, const Field1D& f) {
    DiagnosticsRow row;
    row.t = t;
    row.mass = mass(f);
    if (ref_) {
        row.l1 = lp_distance(f, ref_, 1);
        row.l2 = lp_distance(f, ref_, 2);
        row.ent_quad = relative_entropy(f, ref_, EntropyKind::Quadratic);
        row.ent_boltz = relative_entropy(f, ref_, EntropyKind::Boltzmann);
    }
    if (has_prev_ && t > prev_t_)
        row.residual = (f.values - prev_).cwiseAbs().sum() * f.grid.dx / (t - prev_t_);
    prev_ = f.values;
    prev_t_ = t;
    has_prev_ = true;
    diag_.rows.push_back(row);
}

DiagnosticsRecorder2D::DiagnosticsRecorder2D(std::function<double(double, double)> reference)
    : ref_(std::move(reference)) {}

void DiagnosticsRecorder2D::operator()(double t, const Field2D& f) {
    DiagnosticsRow row;
    row.t = t;
    row.mass = mass(f);
    if (ref_) {
        row.l1 = lp_distance(f, ref_, 1);
        row.l2 = lp_distance(f, ref_, 2);
        row.ent_quad = relative_entropy(f, ref_, EntropyKind::Quadratic);
        row.ent_boltz = relative_entropy(f, ref_, EntropyKind::Boltzmann);
    }
    if (has_prev_ && t > prev_t_)
        row.residual = (f.values - prev_).cwiseAbs().sum() * f.grid.dx * f.grid.dx / (t - prev_t_);
    prev_ = f.values;
    prev_t_ = t;
    has_prev_ = true;
    diag_.rows.push_back(row);
}

} // namespace fracfv
