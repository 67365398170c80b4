#include "fracfv/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace fracfv {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary); // binary: exactly '\n' line ends
    if (!out) throw std::runtime_error("emit_csv: cannot write " + path.string());
    return out;
}

} // namespace

void emit_csv(const Field1D& f, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "x,rho\n";
    for (int i = 0; i < f.grid.N; ++i)
        out << format_double(f.grid.center(i)) << ',' << format_double(f.values[i]) << '\n';
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path.string());
}

void emit_csv(const Field2D& f, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "x,y,rho\n";
    for (int j = 0; j < f.grid.N; ++j)
        for (int i = 0; i < f.grid.N; ++i)
            out << format_double(f.grid.center(i)) << ',' << format_double(f.grid.center(j)) << ','
                << format_double(f(i, j)) << '\n';
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path.string());
}

void emit_csv(const Diagnostics& d, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << "t,mass,l1,l2,ent_quad,ent_boltz,residual\n";
    for (const auto& r : d.rows)
        out << format_double(r.t) << ',' << format_double(r.mass) << ',' << format_double(r.l1)
            << ',' << format_double(r.l2) << ',' << format_double(r.ent_quad) << ','
            << format_double(r.ent_boltz) << ',' << format_double(r.residual) << '\n';
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path.string());
}

void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& columns,
              const std::filesystem::path& path) {
    if (header.size() != columns.size())
        throw std::invalid_argument("emit_csv: header/column count mismatch");
    std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw std::invalid_argument("emit_csv: ragged columns");
    std::ofstream out = open_out(path);
    for (std::size_t k = 0; k < header.size(); ++k)
        out << header[k] << (k + 1 < header.size() ? ',' : '\n');
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = 0; k < columns.size(); ++k)
            out << format_double(columns[k][r]) << (k + 1 < columns.size() ? ',' : '\n');
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path.string());
}

} // namespace fracfv
