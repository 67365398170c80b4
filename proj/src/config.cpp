#include "fracfv/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fracfv/errors.hpp"
#include "fracfv/reference.hpp"

namespace fracfv {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw ConfigError("bad-number", "config: key '" + key + "' has a malformed number: " + v);
    }
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw ConfigError("bad-number", "config: key '" + key + "' has a malformed integer: " + v);
    }
}

} // namespace

Datum parse_datum(const std::string& text) {
    const std::string t = trim(text);
    if (t == "uniform") return Datum{DatumKind::Uniform, 0.0, {}};
    if (t == "gaussian") return Datum{DatumKind::Gaussian, 0.0, {}};
    const std::string prefix = "heat-kernel-at(";
    if (t.rfind(prefix, 0) == 0 && t.back() == ')') {
        const std::string arg = t.substr(prefix.size(), t.size() - prefix.size() - 1);
        const double t0 = to_double("datum", arg);
        if (!(t0 > 0.0)) throw ConfigError("datum-time-nonpositive", "heat-kernel-at requires t0 > 0");
        return Datum{DatumKind::HeatKernelAt, t0, {}};
    }
    if (t.empty()) throw ConfigError("bad-datum", "config: empty datum");
    return Datum{DatumKind::File, 0.0, t};
}

RunConfig validate_config(RunConfig cfg) {
    if (cfg.dimension != 1 && cfg.dimension != 2)
        throw ConfigError("bad-dimension", "config: dimension must be 1 or 2");
    if (cfg.dimension == 1) {
        if (cfg.alpha == 1.0) {
            cfg.alpha = 1.0 + kAlphaOneEpsilon;
            cfg.alpha_adjusted = true;
        }
        if (!(cfg.alpha > 1.0 && cfg.alpha < 2.0))
            throw ConfigError("alpha-out-of-range-1d",
                              "config: 1D runs require alpha in (1, 2); alpha = 1 is mapped to 1 + 1e-11");
    } else {
        if (!(cfg.alpha > 0.0 && cfg.alpha < 2.0))
            throw ConfigError("alpha-out-of-range-2d", "config: 2D runs require alpha in (0, 2)");
    }
    if (cfg.beta < 0.0) throw ConfigError("beta-negative", "config: beta must be >= 0");
    if (!(cfg.R > 0.0)) throw ConfigError("R-nonpositive", "config: R must be positive");
    if (cfg.N < 1) throw ConfigError("N-nonpositive", "config: N must be a positive integer");
    if (!(cfg.dt > 0.0)) throw ConfigError("dt-nonpositive", "config: dt must be positive");
    if (cfg.flux_order != 1 && cfg.flux_order != 2)
        throw ConfigError("bad-flux-order", "config: flux_order must be 1 or 2");
    if (cfg.flux_order == 2 && cfg.dimension != 1)
        throw ConfigError("flux-order-2-requires-1d",
                          "config: the second-order minmod flux exists only in one dimension");
    if (cfg.t_final && cfg.steady)
        throw ConfigError("steady-and-t-final", "config: give either t_final or steady_tol, not both");
    if (!cfg.t_final && !cfg.steady)
        throw ConfigError("missing-stop-rule", "config: give t_final or steady_tol");
    if (cfg.t_final && *cfg.t_final < 0.0)
        throw ConfigError("t-final-negative", "config: t_final must be >= 0");
    if (cfg.steady && !(cfg.steady->tol > 0.0))
        throw ConfigError("steady-tol-nonpositive", "config: steady_tol must be positive");
    if (cfg.threads < 1) throw ConfigError("threads-nonpositive", "config: threads must be >= 1");
    return cfg;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::optional<double> steady_tol, steady_tmax;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("bad-line",
                              "config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "dimension")
            cfg.dimension = to_int(key, value);
        else if (key == "alpha")
            cfg.alpha = to_double(key, value);
        else if (key == "beta")
            cfg.beta = to_double(key, value);
        else if (key == "R")
            cfg.R = to_double(key, value);
        else if (key == "N")
            cfg.N = to_int(key, value);
        else if (key == "dt")
            cfg.dt = to_double(key, value);
        else if (key == "t_final")
            cfg.t_final = to_double(key, value);
        else if (key == "steady_tol") {
            steady_tol = to_double(key, value);
        } else if (key == "steady_t_max") {
            steady_tmax = to_double(key, value);
        } else if (key == "flux_order")
            cfg.flux_order = to_int(key, value);
        else if (key == "datum")
            cfg.datum = parse_datum(value);
        else if (key == "snapshot_times") {
            cfg.snapshot_times.clear();
            std::istringstream vs(value);
            std::string tok;
            while (std::getline(vs, tok, ','))
                if (!trim(tok).empty()) cfg.snapshot_times.push_back(to_double(key, trim(tok)));
        } else if (key == "output_dir")
            cfg.output_dir = value;
        else if (key == "threads")
            cfg.threads = to_int(key, value);
        else
            throw ConfigError("unknown-key", "config: unknown key '" + key + "'");
    }
    if (steady_tol || steady_tmax) {
        RunConfig::Steady s;
        if (steady_tol) s.tol = *steady_tol;
        if (steady_tmax) s.t_max = *steady_tmax;
        cfg.steady = s;
    }
    return validate_config(cfg);
}

namespace {

std::vector<double> read_rho_column(const std::string& path, std::size_t expected,
                                    int value_column) {
    std::ifstream in(path);
    if (!in) throw ConfigError("datum-file-unreadable", "cannot read datum file " + path);
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("datum-file-empty", "datum file has no header: " + path);
    std::vector<double> rho;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        int col = 0;
        double v = 0.0;
        bool got = false;
        while (std::getline(ls, tok, ',')) {
            if (col == value_column) {
                v = to_double("datum-file", trim(tok));
                got = true;
            }
            ++col;
        }
        if (!got) throw ConfigError("datum-file-bad-row", "short row in datum file " + path);
        rho.push_back(v);
    }
    if (rho.size() != expected)
        throw ConfigError("datum-file-size",
                          "datum file " + path + " has " + std::to_string(rho.size()) +
                              " rows, grid needs " + std::to_string(expected));
    return rho;
}

} // namespace

Field1D make_datum(const Grid1D& grid, const Datum& datum, double) {
    switch (datum.kind) {
        case DatumKind::Uniform:
            return uniform_field(grid);
        case DatumKind::Gaussian:
            return init_field(grid, [](double x) { return gaussian_steady(1, x); });
        case DatumKind::HeatKernelAt:
            return init_field(grid,
                              [&](double x) { return heat_kernel_alpha1(1, datum.t0, x); });
        case DatumKind::File: {
            const auto rho = read_rho_column(datum.path, static_cast<std::size_t>(grid.N), 1);
            Field1D f = zero_field(grid);
            for (int i = 0; i < grid.N; ++i) f.values[i] = rho[static_cast<std::size_t>(i)];
            if (!f.values.allFinite())
                throw InvalidDatum("make_datum: non-finite value in datum file");
            return f;
        }
    }
    throw std::logic_error("make_datum: unreachable");
}

Field2D make_datum(const Grid2D& grid, const Datum& datum, double) {
    switch (datum.kind) {
        case DatumKind::Uniform:
            return uniform_field(grid);
        case DatumKind::Gaussian:
            return init_field(grid,
                              [](double x, double y) { return gaussian_steady(2, std::hypot(x, y)); });
        case DatumKind::HeatKernelAt:
            return init_field(grid, [&](double x, double y) {
                return heat_kernel_alpha1(2, datum.t0, std::hypot(x, y));
            });
        case DatumKind::File: {
            const auto rho =
                read_rho_column(datum.path, static_cast<std::size_t>(grid.N) * grid.N, 2);
            Field2D f = zero_field(grid);
            for (Eigen::Index k = 0; k < f.values.size(); ++k)
                f.values[k] = rho[static_cast<std::size_t>(k)];
            if (!f.values.allFinite())
                throw InvalidDatum("make_datum: non-finite value in datum file");
            return f;
        }
    }
    throw std::logic_error("make_datum: unreachable");
}

} // namespace fracfv
