#include "fracfv/experiments.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "fracfv/analysis.hpp"
#include "fracfv/csv.hpp"
#include "fracfv/errors.hpp"
#include "fracfv/reference.hpp"
#include "fracfv/scheme1d.hpp"
#include "fracfv/scheme2d.hpp"
#include "fracfv/threading.hpp"

namespace fracfv {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

double ov_double(const Overrides& ov, const std::string& key, double fallback) {
    auto it = ov.find(key);
    if (it == ov.end()) return fallback;
    return std::stod(it->second);
}

int ov_int(const Overrides& ov, const std::string& key, int fallback) {
    auto it = ov.find(key);
    if (it == ov.end()) return fallback;
    return std::stoi(it->second);
}

std::vector<double> ov_list(const Overrides& ov, const std::string& key,
                            std::vector<double> fallback) {
    auto it = ov.find(key);
    if (it == ov.end()) return fallback;
    std::vector<double> out;
    std::istringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

void write_summary(const json& summary, const fs::path& dir) {
    fs::create_directories(dir);
    std::ofstream out(dir / "summary.json", std::ios::binary);
    out << summary.dump(2) << '\n';
}

std::string alpha_tag(double alpha) {
    std::ostringstream ss;
    ss << "alpha" << alpha;
    std::string s = ss.str();
    for (char& c : s)
        if (c == '.') c = 'p';
    return s;
}

// Shared driver: steady state of the 1D scheme from a uniform datum.
SteadyResult1D steady_1d(double alpha, double beta, double R, int N, double dt, int flux_order,
                         double tol, double t_max, const Field1D* datum = nullptr) {
    const Grid1D grid = build_grid_1d(R, N);
    const KernelTable1D table = kernel_table_1d(grid, alpha);
    const SchemeMatrices1D m = assemble_matrices(grid, alpha, beta, table, dt);
    Field1D start = datum ? *datum : uniform_field(grid);
    return run_to_steady(std::move(start), m, flux_order, SteadyOptions{tol, t_max});
}

SteadyResult2D steady_2d(double alpha, double beta, double R, int N, double dt, double tol,
                         double t_max, int threads) {
    const Grid2D grid = build_grid_2d(R, N);
    const KernelTable2D table = kernel_table_2d(grid, alpha, threads);
    const SplitScheme2D scheme(grid, alpha, beta, table, dt);
    return run_to_steady_2d(uniform_field(grid), scheme, SteadyOptions{tol, t_max}, {}, threads);
}

// ---------------------------------------------------------------------------
// convergence-1d: refine meshes, measure successive steady-state differences.
// ---------------------------------------------------------------------------
json exp_convergence_1d(const Overrides& ov, const fs::path& dir, int threads) {
    const std::vector<double> alphas = ov_list(ov, "alphas", {1.2, 1.5, 1.8});
    const double R = ov_double(ov, "R", 5.0);
    const double beta = ov_double(ov, "beta", 1.0);
    const int flux_order = ov_int(ov, "flux_order", 1);
    const int n_min_log = ov_int(ov, "n_min_log2", 5);
    const int n_max_log = ov_int(ov, "n_max_log2", 9);
    const double tol = ov_double(ov, "tol", 1e-9);
    const double t_max = ov_double(ov, "t_max", 60.0);
    const double target = flux_order == 1 ? 1.0 : 2.0;
    const double band = flux_order == 1 ? 0.25 : 0.3;

    std::vector<int> Ns;
    for (int p = n_min_log; p <= n_max_log; ++p) Ns.push_back(1 << p);

    // All (alpha, N) runs are independent; run them on the worker pool.
    std::vector<Field1D> steadies(alphas.size() * Ns.size());
    const int total = static_cast<int>(steadies.size());
    parallel_for(0, total, threads, [&](int lo, int hi) {
        for (int k = lo; k < hi; ++k) {
            const double alpha = alphas[static_cast<std::size_t>(k) / Ns.size()];
            const int N = Ns[static_cast<std::size_t>(k) % Ns.size()];
            const double dx = 2.0 * R / N;
            // dt = dx (implicit) or dx^2 (IMEX); the steady state itself is
            // dt-independent, so the IMEX step is additionally capped at the
            // advective CFL limit to keep coarse meshes stable.
            double dt = flux_order == 1 ? dx : dx * dx;
            if (flux_order == 2 && beta > 0.0) dt = std::min(dt, 0.8 * dx / (beta * R));
            steadies[static_cast<std::size_t>(k)] =
                steady_1d(alpha, beta, R, N, dt, flux_order, tol, t_max).state;
        }
    });

    json summary{{"experiment", flux_order == 1 ? "convergence-1d" : "convergence-1d (minmod)"},
                 {"flux_order", flux_order},
                 {"target_order", target},
                 {"checks", json::array()}};
    bool all_pass = true;
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        std::vector<double> e1, e2, hs;
        for (std::size_t k = 0; k + 1 < Ns.size(); ++k) {
            const Field1D& coarse = steadies[a * Ns.size() + k];
            const Field1D& fine = steadies[a * Ns.size() + k + 1];
            e1.push_back(lp_distance_nested(coarse, fine, 1));
            e2.push_back(lp_distance_nested(coarse, fine, 2));
            hs.push_back(coarse.grid.dx);
        }
        const ConvergenceFit f1 = convergence_order(e1, hs);
        const ConvergenceFit f2 = convergence_order(e2, hs);
        emit_csv({"dx", "l1", "l2"}, {hs, e1, e2},
                 dir / ("convergence_" + alpha_tag(alphas[a]) + ".csv"));
        const bool ok =
            std::abs(f1.slope - target) <= band && std::abs(f2.slope - target) <= band;
        all_pass = all_pass && ok;
        summary["checks"].push_back(json{{"alpha", alphas[a]},
                                         {"slope_l1", f1.slope},
                                         {"slope_l2", f2.slope},
                                         {"pairwise_l1", f1.pairwise},
                                         {"band", band},
                                         {"pass", ok}});
    }
    summary["pass"] = all_pass;
    write_summary(summary, dir);
    return summary;
}

// ---------------------------------------------------------------------------
// heat1d-interior: order-one diffusion against the explicit kernel, interior window.
// ---------------------------------------------------------------------------
json exp_heat1d_interior(const Overrides& ov, const fs::path& dir, int threads) {
    (void)threads;
    const double R = ov_double(ov, "R", 20.0);
    const int N0 = ov_int(ov, "N", 400);
    const double T = ov_double(ov, "t_final", 2.0);
    const double alpha = 1.0 + kAlphaOneEpsilon;

    auto interior_error = [&](int N) {
        const Grid1D grid = build_grid_1d(R, N);
        const double dt = grid.dx; // refining the mesh refines the step as well
        const KernelTable1D table = kernel_table_1d(grid, alpha);
        const SchemeMatrices1D m = assemble_matrices(grid, alpha, 0.0, table, dt);
        Field1D state = init_field(grid, [&](double x) { return heat_kernel_alpha1(1, dt, x); });
        const long long steps = std::llround(T / dt) - 1; // datum already sits at t = dt
        for (long long k = 0; k < steps; ++k) state = implicit_step(state, m);
        const double t_cmp = static_cast<double>(steps + 1) * dt;
        const Box1D window{-0.5 * R, 0.5 * R};
        auto ref = [&](double x) { return heat_kernel_alpha1(1, t_cmp, x); };
        const double err = lp_distance(state, ref, 1, window);
        double norm = 0.0;
        for (int i = 0; i < grid.N; ++i)
            if (window.contains(grid.center(i))) norm += std::abs(ref(grid.center(i))) * grid.dx;
        emit_csv(state, dir / ("profile_n" + std::to_string(N) + ".csv"));
        return err / norm;
    };

    const double err_coarse = interior_error(N0);
    const double err_fine = interior_error(2 * N0);
    const bool pass = err_coarse <= 0.05 && err_fine < err_coarse;
    json summary{{"experiment", "heat1d-interior"},
                 {"relative_l1_interior", err_coarse},
                 {"relative_l1_interior_refined", err_fine},
                 {"decreases_under_refinement", err_fine < err_coarse},
                 {"tolerance", 0.05},
                 {"pass", pass}};
    write_summary(summary, dir);
    return summary;
}

// ---------------------------------------------------------------------------
// heat1d-boundary: zero-drift steady state, potential flatness and boundary growth.
// ---------------------------------------------------------------------------
json exp_heat1d_boundary(const Overrides& ov, const fs::path& dir, int threads) {
    (void)threads;
    const double alpha = ov_double(ov, "alpha", 1.5);
    const double R = ov_double(ov, "R", 10.0);
    const int N = ov_int(ov, "N", 200);
    const double dt = ov_double(ov, "dt", 0.5);
    const double tol = ov_double(ov, "tol", 1e-8);
    const double t_max = ov_double(ov, "t_max", 4000.0);

    const Grid1D grid = build_grid_1d(R, N);
    const KernelTable1D table = kernel_table_1d(grid, alpha);
    const SchemeMatrices1D m = assemble_matrices(grid, alpha, 0.0, table, dt);
    Field1D datum = init_field(grid, [&](double x) { return heat_kernel_alpha1(1, dt, x); });
    const SteadyResult1D res = run_to_steady(std::move(datum), m, 1, SteadyOptions{tol, t_max});

    const double flatness = riesz_flatness(res.state, table);
    double interior_sum = 0.0;
    int interior_count = 0;
    for (int i = 0; i < N; ++i)
        if (std::abs(grid.center(i)) <= 0.8 * R) {
            interior_sum += res.state.values[i];
            ++interior_count;
        }
    const double interior_mean = interior_sum / interior_count;
    const double boundary_cell = 0.5 * (res.state.values[0] + res.state.values[N - 1]);

    emit_csv(res.state, dir / "steady_profile.csv");
    {
        const Eigen::VectorXd I = apply_kernel_1d(table, res.state.values);
        std::vector<double> xs(grid.centers), Is(I.data(), I.data() + I.size());
        emit_csv({"x", "potential"}, {xs, Is}, dir / "riesz_potential.csv");
    }
    const bool pass = res.converged && flatness <= 0.01 && boundary_cell > interior_mean;
    json summary{{"experiment", "heat1d-boundary"},
                 {"converged", res.converged},
                 {"t_stop", res.t},
                 {"residual", res.residual},
                 {"riesz_flatness", flatness},
                 {"boundary_cell", boundary_cell},
                 {"interior_mean", interior_mean},
                 {"boundary_exceeds_interior", boundary_cell > interior_mean},
                 {"pass", pass}};
    write_summary(summary, dir);
    return summary;
}

// ---------------------------------------------------------------------------
// lfp1d-exact: drift-diffusion at order one against the explicit solution.
// ---------------------------------------------------------------------------
json exp_lfp1d_exact(const Overrides& ov, const fs::path& dir, int threads) {
    (void)threads;
    const double R = ov_double(ov, "R", 50.0);
    const int N = ov_int(ov, "N", 1000);
    const double dt = ov_double(ov, "dt", 0.05);
    const double T = ov_double(ov, "t_final", 10.0);
    const double alpha = 1.0 + kAlphaOneEpsilon;

    const Grid1D grid = build_grid_1d(R, N);
    const KernelTable1D table = kernel_table_1d(grid, alpha);
    const SchemeMatrices1D m = assemble_matrices(grid, alpha, 1.0, table, dt);

    DiagnosticsRecorder1D recorder([](double x) { return lfp_steady_1d(x); });
    const std::vector<double> snaps = ov_list(ov, "snapshots", {0.4, 1.0, 3.0, 4.0, 10.0});
    Field1D state = uniform_field(grid);
    RunStats stats;
    Field1D final = run(
        std::move(state), m, T, 1,
        [&](double t, const Field1D& f) {
            recorder(t, f);
            for (double s : snaps)
                if (std::abs(t - s) < 0.5 * dt) emit_csv(f, dir / ("snapshot_t" + format_double(s) + ".csv"));
        },
        &stats);
    emit_csv(recorder.diagnostics(), dir / "diagnostics.csv");
    emit_csv(final, dir / "final_profile.csv");

    const double final_l1 = lp_distance(final, [](double x) { return lfp_steady_1d(x); }, 1);
    const bool pass = final_l1 <= 0.05;
    json summary{{"experiment", "lfp1d-exact"},
                 {"final_l1_to_steady", final_l1},
                 {"threshold", 0.05},
                 {"t_final", stats.t},
                 {"pass", pass}};
    write_summary(summary, dir);
    return summary;
}

// ---------------------------------------------------------------------------
// domain-sweep-1d: steady-state mismatch against whole-line profiles vs R.
// ---------------------------------------------------------------------------
json exp_domain_sweep_1d(const Overrides& ov, const fs::path& dir, int threads) {
    const std::vector<double> Rs = ov_list(ov, "Rs", {10.0, 20.0, 40.0});
    const double dx = ov_double(ov, "dx", 0.1);
    const double dt = ov_double(ov, "dt", 0.1);
    const double tol = ov_double(ov, "tol", 1e-9);
    const double t_max = ov_double(ov, "t_max", 200.0);

    struct Case {
        const char* name;
        double alpha;
        std::function<double(double)> reference;
    };
    const Case cases[] = {
        {"alpha-one", 1.0 + kAlphaOneEpsilon, [](double x) { return lfp_steady_1d(x); }},
        {"alpha-1.98", 1.98, [](double x) { return gaussian_steady(1, x); }},
    };

    json summary{{"experiment", "domain-sweep-1d"}, {"cases", json::array()}};
    bool all_pass = true;
    for (const Case& c : cases) {
        std::vector<double> rs, errs;
        std::vector<Field1D> fields(Rs.size());
        parallel_for(0, static_cast<int>(Rs.size()), threads, [&](int lo, int hi) {
            for (int k = lo; k < hi; ++k) {
                const double R = Rs[static_cast<std::size_t>(k)];
                const int N = static_cast<int>(std::lround(2.0 * R / dx));
                fields[static_cast<std::size_t>(k)] =
                    steady_1d(c.alpha, 1.0, R, N, dt, 1, tol, t_max).state;
            }
        });
        for (std::size_t k = 0; k < Rs.size(); ++k) {
            rs.push_back(Rs[k]);
            errs.push_back(lp_distance(fields[k], c.reference, 1));
        }
        bool monotone = true;
        for (std::size_t k = 0; k + 1 < errs.size(); ++k) monotone = monotone && errs[k + 1] < errs[k];
        emit_csv({"R", "l1"}, {rs, errs}, dir / (std::string("domain_error_") + c.name + ".csv"));
        all_pass = all_pass && monotone;
        summary["cases"].push_back(json{{"case", c.name},
                                        {"alpha", c.alpha},
                                        {"R", rs},
                                        {"l1", errs},
                                        {"monotone_decreasing", monotone}});
    }
    summary["pass"] = all_pass;
    write_summary(summary, dir);
    return summary;
}

// ---------------------------------------------------------------------------
// entropy-1d: dissipation of both relative entropies toward the equilibrium.
// ---------------------------------------------------------------------------
json exp_entropy_1d(const Overrides& ov, const fs::path& dir, int threads) {
    (void)threads;
    const double R = ov_double(ov, "R", 20.0);
    const int N = ov_int(ov, "N", 400);
    const double dt = ov_double(ov, "dt", 0.02);
    const double T = ov_double(ov, "t_final", 6.0);
    const Interval window{ov_double(ov, "fit_lo", 1.0), ov_double(ov, "fit_hi", 5.0)};
    const double alpha = 1.0 + kAlphaOneEpsilon;

    const Grid1D grid = build_grid_1d(R, N);
    const KernelTable1D table = kernel_table_1d(grid, alpha);
    const SchemeMatrices1D m = assemble_matrices(grid, alpha, 1.0, table, dt);
    DiagnosticsRecorder1D recorder([](double x) { return lfp_steady_1d(x); });
    run(uniform_field(grid), m, T, 1, std::ref(recorder));
    const Diagnostics& diag = recorder.diagnostics();
    emit_csv(diag, dir / "diagnostics.csv");

    const double rate_quad =
        decay_rate_fit(diag.times(), diag.column(&DiagnosticsRow::ent_quad), window);
    const double rate_boltz =
        decay_rate_fit(diag.times(), diag.column(&DiagnosticsRow::ent_boltz), window);
    const bool pass = std::abs(rate_quad + 1.0) <= 0.25 && std::abs(rate_boltz + 1.0) <= 0.25;
    json summary{{"experiment", "entropy-1d"},
                 {"rate_quadratic", rate_quad},
                 {"rate_boltzmann", rate_boltz},
                 {"target", -1.0},
                 {"band", 0.25},
                 {"pass", pass}};
    write_summary(summary, dir);
    return summary;
}

// ---------------------------------------------------------------------------
// steady-sweep-1d: steady profiles across alpha, algebraic tail exponents.
// ---------------------------------------------------------------------------
json exp_steady_sweep_1d(const Overrides& ov, const fs::path& dir, int threads) {
    const std::vector<double> alphas = ov_list(ov, "alphas", {1.2, 1.5, 1.8});
    const double R = ov_double(ov, "R", 50.0);
    const int N = ov_int(ov, "N", 1000);
    const double dt = ov_double(ov, "dt", 0.05);
    const double tol = ov_double(ov, "tol", 1e-10);
    const double t_max = ov_double(ov, "t_max", 100.0);
    const Interval window{ov_double(ov, "fit_lo", 0.3 * R), ov_double(ov, "fit_hi", 0.8 * R)};

    std::vector<Field1D> fields(alphas.size());
    parallel_for(0, static_cast<int>(alphas.size()), threads, [&](int lo, int hi) {
        for (int k = lo; k < hi; ++k)
            fields[static_cast<std::size_t>(k)] =
                steady_1d(alphas[static_cast<std::size_t>(k)], 1.0, R, N, dt, 1, tol, t_max).state;
    });

    json summary{{"experiment", "steady-sweep-1d"}, {"fits", json::array()}};
    bool all_pass = true;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        const double fit = tail_exponent_fit(fields[k], window);
        const double target = -(alphas[k] + 1.0);
        const bool ok = std::abs(fit - target) <= 0.3;
        all_pass = all_pass && ok;
        emit_csv(fields[k], dir / ("steady_" + alpha_tag(alphas[k]) + ".csv"));
        summary["fits"].push_back(json{{"alpha", alphas[k]},
                                       {"tail_exponent", fit},
                                       {"target", target},
                                       {"band", 0.3},
                                       {"pass", ok}});
    }
    summary["pass"] = all_pass;
    write_summary(summary, dir);
    return summary;
}

// ---------------------------------------------------------------------------
// steady-sweep-2d: radial steady profiles across alpha, tail exponents.
// ---------------------------------------------------------------------------
json exp_steady_sweep_2d(const Overrides& ov, const fs::path& dir, int threads) {
    const std::vector<double> alphas = ov_list(ov, "alphas", {0.5, 1.0, 1.5});
    const double R = ov_double(ov, "R", 20.0);
    const int N = ov_int(ov, "N", 128);
    const double dt = ov_double(ov, "dt", 0.2);
    const double tol = ov_double(ov, "tol", 1e-8);
    const double t_max = ov_double(ov, "t_max", 80.0);
    const Interval window{ov_double(ov, "fit_lo", 0.3 * R), ov_double(ov, "fit_hi", 0.8 * R)};

    json summary{{"experiment", "steady-sweep-2d"}, {"fits", json::array()}};
    bool all_pass = true;
    for (double alpha : alphas) {
        const SteadyResult2D res = steady_2d(alpha, 1.0, R, N, dt, tol, t_max, threads);
        const double fit = tail_exponent_fit(res.state, window);
        const double target = -(alpha + 2.0);
        const bool ok = std::abs(fit - target) <= 0.4;
        all_pass = all_pass && ok;
        // central section along y ~ 0
        const int jmid = N / 2;
        std::vector<double> xs, rho;
        for (int i = 0; i < N; ++i) {
            xs.push_back(res.state.grid.center(i));
            rho.push_back(res.state(i, jmid));
        }
        emit_csv({"x", "rho"}, {xs, rho}, dir / ("section_" + alpha_tag(alpha) + ".csv"));
        summary["fits"].push_back(json{{"alpha", alpha},
                                       {"tail_exponent", fit},
                                       {"target", target},
                                       {"band", 0.4},
                                       {"converged", res.converged},
                                       {"pass", ok}});
    }
    summary["pass"] = all_pass;
    write_summary(summary, dir);
    return summary;
}

// ---------------------------------------------------------------------------
// lfp2d-steady: 2D steady state against the explicit whole-plane profile.
// ---------------------------------------------------------------------------
json exp_lfp2d_steady(const Overrides& ov, const fs::path& dir, int threads) {
    const double R0 = ov_double(ov, "R", 10.0);
    const int N0 = ov_int(ov, "N", 128);
    const double dt = ov_double(ov, "dt", 0.1);
    const double tol = ov_double(ov, "tol", 1e-8);
    const double t_max = ov_double(ov, "t_max", 80.0);

    auto rel_error = [&](double R, int N, const std::string& tag) {
        const SteadyResult2D res = steady_2d(1.0, 1.0, R, N, dt, tol, t_max, threads);
        auto ref = [](double x, double y) { return lfp_steady_2d(x, y); };
        const double err = lp_distance(res.state, ref, 1);
        const double norm = lp_distance(zero_field(res.state.grid), ref, 1);
        emit_csv(res.state, dir / ("steady_field_" + tag + ".csv"));
        const int jmid = res.state.grid.N / 2;
        std::vector<double> xs, rho, refv;
        for (int i = 0; i < res.state.grid.N; ++i) {
            xs.push_back(res.state.grid.center(i));
            rho.push_back(res.state(i, jmid));
            refv.push_back(lfp_steady_2d(res.state.grid.center(i), res.state.grid.center(jmid)));
        }
        emit_csv({"x", "rho", "reference"}, {xs, rho, refv}, dir / ("section_" + tag + ".csv"));
        return err / norm;
    };

    const double err_base = rel_error(R0, N0, "base");
    const double err_wide = rel_error(2.0 * R0, 2 * N0, "wide");
    const bool pass = err_base <= 0.10 && err_wide < err_base;
    json summary{{"experiment", "lfp2d-steady"},
                 {"relative_l1", err_base},
                 {"relative_l1_wider_domain", err_wide},
                 {"decreases_with_R", err_wide < err_base},
                 {"threshold", 0.10},
                 {"pass", pass}};
    write_summary(summary, dir);
    return summary;
}

// ---------------------------------------------------------------------------
// convergence-2d: mesh refinement of split steady states.
// ---------------------------------------------------------------------------
json exp_convergence_2d(const Overrides& ov, const fs::path& dir, int threads) {
    const std::vector<double> alphas = ov_list(ov, "alphas", {0.5, 1.0, 1.5});
    const double R = ov_double(ov, "R", 10.0);
    const double beta = ov_double(ov, "beta", 1.0);
    const int n_min_log = ov_int(ov, "n_min_log2", 4);
    const int n_max_log = ov_int(ov, "n_max_log2", 7);
    const double tol = ov_double(ov, "tol", 1e-8);
    const double t_max = ov_double(ov, "t_max", 60.0);

    std::vector<int> Ns;
    for (int p = n_min_log; p <= n_max_log; ++p) Ns.push_back(1 << p);

    json summary{{"experiment", "convergence-2d"}, {"checks", json::array()}};
    bool all_pass = true;
    for (double alpha : alphas) {
        std::vector<Field2D> steadies;
        for (int N : Ns) {
            const double dt = 2.0 * R / N; // dt = dx
            steadies.push_back(steady_2d(alpha, beta, R, N, dt, tol, t_max, threads).state);
        }
        std::vector<double> e1, hs;
        for (std::size_t k = 0; k + 1 < steadies.size(); ++k) {
            e1.push_back(lp_distance_nested(steadies[k], steadies[k + 1], 1));
            hs.push_back(steadies[k].grid.dx);
        }
        const ConvergenceFit fit = convergence_order(e1, hs);
        emit_csv({"dx", "l1"}, {hs, e1}, dir / ("convergence_" + alpha_tag(alpha) + ".csv"));
        const bool ok = fit.slope >= 0.6 && fit.slope <= 1.1;
        all_pass = all_pass && ok;
        summary["checks"].push_back(json{{"alpha", alpha},
                                         {"slope_l1", fit.slope},
                                         {"pairwise_l1", fit.pairwise},
                                         {"band", json::array({0.6, 1.1})},
                                         {"pass", ok}});
    }
    summary["pass"] = all_pass;
    write_summary(summary, dir);
    return summary;
}

// ---------------------------------------------------------------------------
// longtime-2d: exponential approach to the steady state from symmetric data.
// ---------------------------------------------------------------------------
json exp_longtime_2d(const Overrides& ov, const fs::path& dir, int threads) {
    const double R = ov_double(ov, "R", 10.0);
    const int N = ov_int(ov, "N", 128);
    const double dt = ov_double(ov, "dt", 0.08);
    const double T = ov_double(ov, "t_final", 4.0);
    const Interval window{ov_double(ov, "fit_lo", 0.5), ov_double(ov, "fit_hi", 3.0)};
    const double alpha = ov_double(ov, "alpha", 1.0);

    const Grid2D grid = build_grid_2d(R, N);
    const KernelTable2D table = kernel_table_2d(grid, alpha, threads);
    const SplitScheme2D scheme(grid, alpha, 1.0, table, dt);
    const SteadyResult2D steady =
        run_to_steady_2d(uniform_field(grid), scheme, SteadyOptions{1e-10, 120.0}, {}, threads);

    std::vector<double> ts, d1, d2;
    run_2d(uniform_field(grid), scheme, T,
           [&](double t, const Field2D& f) {
               ts.push_back(t);
               d1.push_back(lp_distance(f, steady.state, 1));
               d2.push_back(lp_distance(f, steady.state, 2));
           },
           threads);
    emit_csv({"t", "l1", "l2"}, {ts, d1, d2}, dir / "distance_to_steady.csv");

    const double rate = decay_rate_fit(ts, d1, window);
    const bool pass = std::abs(rate + 2.0) <= 0.4;
    json summary{{"experiment", "longtime-2d"},
                 {"rate_l1", rate},
                 {"target", -2.0},
                 {"band", 0.4},
                 {"steady_converged", steady.converged},
                 {"pass", pass}};
    write_summary(summary, dir);
    return summary;
}

// ---------------------------------------------------------------------------
// splitting-2d: Lie splitting against the unsplit dense operator.
// ---------------------------------------------------------------------------
json exp_splitting_2d(const Overrides& ov, const fs::path& dir, int threads) {
    const double R = ov_double(ov, "R", 5.0);
    const int N = ov_int(ov, "N", 16);
    const double alpha = ov_double(ov, "alpha", 1.0);
    const double beta = ov_double(ov, "beta", 1.0);
    const double T = ov_double(ov, "t_final", 1.0);
    const double dt0 = ov_double(ov, "dt", 0.1);

    const Grid2D grid = build_grid_2d(R, N);
    const KernelTable2D table = kernel_table_2d(grid, alpha, threads);

    auto difference_at = [&](double dt) {
        const SplitScheme2D scheme(grid, alpha, beta, table, dt);
        const FullSystem2D full = assemble_full_2d(grid, alpha, beta, table, dt);
        Field2D split_state = uniform_field(grid);
        Field2D full_state = uniform_field(grid);
        const long long steps = std::llround(T / dt);
        for (long long k = 0; k < steps; ++k) {
            split_state = split_step(split_state, scheme, threads);
            full_state = full.implicit_step(full_state);
        }
        return (split_state.values - full_state.values).cwiseAbs().maxCoeff();
    };

    const double diff_coarse = difference_at(dt0);
    const double diff_fine = difference_at(0.5 * dt0);
    const double ratio = diff_coarse / diff_fine;
    emit_csv({"dt", "max_difference"}, {{dt0, 0.5 * dt0}, {diff_coarse, diff_fine}},
             dir / "splitting_difference.csv");
    const bool pass = ratio >= 1.6 && ratio <= 2.4;
    json summary{{"experiment", "splitting-2d"},
                 {"difference_dt", diff_coarse},
                 {"difference_half_dt", diff_fine},
                 {"halving_ratio", ratio},
                 {"band", json::array({1.6, 2.4})},
                 {"pass", pass}};
    write_summary(summary, dir);
    return summary;
}

struct Entry {
    ExperimentInfo info;
    json (*fn)(const Overrides&, const fs::path&, int);
};

const std::vector<Entry>& entries() {
    static const std::vector<Entry> table = {
        {{"heat1d-interior", "order-one diffusion vs the explicit kernel on the interior"},
         exp_heat1d_interior},
        {{"heat1d-boundary", "zero-drift steady state: potential flatness, boundary growth"},
         exp_heat1d_boundary},
        {{"lfp1d-exact", "drift-diffusion at order one vs the explicit solution"},
         exp_lfp1d_exact},
        {{"domain-sweep-1d", "steady-state mismatch vs whole-line profiles as R grows"},
         exp_domain_sweep_1d},
        {{"entropy-1d", "relative entropy dissipation toward the equilibrium"}, exp_entropy_1d},
        {{"steady-sweep-1d", "steady profiles across alpha with tail exponents"},
         exp_steady_sweep_1d},
        {{"convergence-1d", "steady-state mesh refinement (flux_order=1 or 2)"},
         exp_convergence_1d},
        {{"steady-sweep-2d", "2D steady profiles across alpha with tail exponents"},
         exp_steady_sweep_2d},
        {{"lfp2d-steady", "2D steady state vs the explicit whole-plane profile"},
         exp_lfp2d_steady},
        {{"convergence-2d", "2D split steady-state mesh refinement"}, exp_convergence_2d},
        {{"longtime-2d", "2D exponential approach to the steady state"}, exp_longtime_2d},
        {{"splitting-2d", "split vs unsplit step consistency under dt halving"},
         exp_splitting_2d},
    };
    return table;
}

} // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
    static const std::vector<ExperimentInfo> infos = [] {
        std::vector<ExperimentInfo> v;
        for (const auto& e : entries()) v.push_back(e.info);
        return v;
    }();
    return infos;
}

nlohmann::json run_experiment(const std::string& name, const Overrides& overrides,
                              const std::filesystem::path& out_dir, int threads) {
    for (const auto& e : entries()) {
        if (e.info.name == name) {
            std::filesystem::create_directories(out_dir);
            return e.fn(overrides, out_dir, threads);
        }
    }
    std::string listing = "unknown experiment '" + name + "'. Registered experiments:";
    for (const auto& e : entries()) listing += "\n  " + e.info.name + " - " + e.info.description;
    throw ConfigError("unknown-experiment", listing);
}

nlohmann::json run_single(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    json summary{{"dimension", cfg.dimension}, {"alpha", cfg.alpha}, {"beta", cfg.beta},
                 {"R", cfg.R},                 {"N", cfg.N},         {"dt", cfg.dt}};
    if (cfg.alpha_adjusted) summary["alpha_adjusted_from_one"] = true;

    if (cfg.dimension == 1) {
        const Grid1D grid = build_grid_1d(cfg.R, cfg.N);
        const KernelTable1D table = kernel_table_1d(grid, cfg.alpha);
        const SchemeMatrices1D m = assemble_matrices(grid, cfg.alpha, cfg.beta, table, cfg.dt);
        Field1D state = make_datum(grid, cfg.datum, cfg.alpha);
        DiagnosticsRecorder1D recorder;
        auto observer = [&](double t, const Field1D& f) {
            recorder(t, f);
            for (double s : cfg.snapshot_times)
                if (std::abs(t - s) < 0.5 * cfg.dt)
                    emit_csv(f, out_dir / ("snapshot_t" + format_double(s) + ".csv"));
        };
        Field1D final = zero_field(grid);
        if (cfg.t_final) {
            RunStats stats;
            final = run(std::move(state), m, *cfg.t_final, cfg.flux_order, observer, &stats);
            summary["t_final"] = stats.t;
            summary["steps"] = stats.steps;
            if (stats.cfl_warning) summary["cfl_warning"] = true;
        } else {
            const SteadyResult1D res = run_to_steady(std::move(state), m, cfg.flux_order,
                                                     SteadyOptions{cfg.steady->tol, cfg.steady->t_max},
                                                     observer);
            final = res.state;
            summary["converged"] = res.converged;
            summary["t_stop"] = res.t;
            summary["residual"] = res.residual;
            if (res.cfl_warning) summary["cfl_warning"] = true;
        }
        emit_csv(final, out_dir / "final_profile.csv");
        emit_csv(recorder.diagnostics(), out_dir / "diagnostics.csv");
        summary["mass"] = mass(final);
    } else {
        const Grid2D grid = build_grid_2d(cfg.R, cfg.N);
        const KernelTable2D table = kernel_table_2d(grid, cfg.alpha, cfg.threads);
        const SplitScheme2D scheme(grid, cfg.alpha, cfg.beta, table, cfg.dt);
        Field2D state = make_datum(grid, cfg.datum, cfg.alpha);
        DiagnosticsRecorder2D recorder;
        auto observer = [&](double t, const Field2D& f) {
            recorder(t, f);
            for (double s : cfg.snapshot_times)
                if (std::abs(t - s) < 0.5 * cfg.dt)
                    emit_csv(f, out_dir / ("snapshot_t" + format_double(s) + ".csv"));
        };
        Field2D final = zero_field(grid);
        if (cfg.t_final) {
            RunStats stats;
            final = run_2d(std::move(state), scheme, *cfg.t_final, observer, cfg.threads, &stats);
            summary["t_final"] = stats.t;
            summary["steps"] = stats.steps;
        } else {
            const SteadyResult2D res =
                run_to_steady_2d(std::move(state), scheme,
                                 SteadyOptions{cfg.steady->tol, cfg.steady->t_max}, observer,
                                 cfg.threads);
            final = res.state;
            summary["converged"] = res.converged;
            summary["t_stop"] = res.t;
            summary["residual"] = res.residual;
        }
        emit_csv(final, out_dir / "final_field.csv");
        emit_csv(recorder.diagnostics(), out_dir / "diagnostics.csv");
        summary["mass"] = mass(final);
    }
    write_summary(summary, out_dir);
    return summary;
}

} // namespace fracfv
