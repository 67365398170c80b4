#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fracfv/analysis.hpp"
#include "fracfv/grid.hpp"

namespace fracfv {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// 1D field: header "x,rho", one row per cell.
void emit_csv(const Field1D& f, const std::filesystem::path& path);

/// 2D field: header "x,y,rho", rows in storage order (x fastest).
void emit_csv(const Field2D& f, const std::filesystem::path& path);

/// Diagnostics: header "t,mass,l1,l2,ent_quad,ent_boltz,residual".
void emit_csv(const Diagnostics& d, const std::filesystem::path& path);

/// Generic column series with caller-provided header names.
void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& columns,
              const std::filesystem::path& path);

} // namespace fracfv
