#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracfv/grid.hpp"

namespace fracfv {

enum class DatumKind { Uniform, HeatKernelAt, Gaussian, File };

struct Datum {
    DatumKind kind = DatumKind::Uniform;
    double t0 = 0.0;  // for heat-kernel-at(t0)
    std::string path; // for file data
};

/// Validated run parameters. One-dimensional runs accept alpha in (1,2);
/// requesting alpha = 1 maps it to 1 + 1e-11 (alpha_adjusted is set).
/// Two-dimensional runs accept alpha in (0,2). The second-order flux exists
/// only in one dimension.
struct RunConfig {
    int dimension = 1;
    double alpha = 1.5;
    double beta = 1.0;
    double R = 10.0;
    int N = 200;
    double dt = 0.1;
    std::optional<double> t_final;
    struct Steady {
        double tol = 1e-8;
        double t_max = 1000.0;
    };
    std::optional<Steady> steady;
    int flux_order = 1;
    Datum datum;
    std::vector<double> snapshot_times;
    std::string output_dir = "out";
    int threads = 1;
    bool alpha_adjusted = false;
};

inline constexpr double kAlphaOneEpsilon = 1e-11;

/// Parses a key = value document ('#' comments, blank lines allowed) and
/// validates it. Unknown keys and range violations raise ConfigError with a
/// stable code such as "alpha-out-of-range-1d" or "flux-order-2-requires-1d".
RunConfig parse_config(const std::string& text);

/// Range validation and the alpha = 1 mapping; used by parse_config and by
/// programmatic callers.
RunConfig validate_config(RunConfig cfg);

/// Parses the datum syntax: uniform | gaussian | heat-kernel-at(t0) | a file path.
Datum parse_datum(const std::string& text);

/// Instantiates the datum on a grid.
Field1D make_datum(const Grid1D& grid, const Datum& datum, double alpha);
Field2D make_datum(const Grid2D& grid, const Datum& datum, double alpha);

} // namespace fracfv
