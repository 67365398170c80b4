#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracfv/config.hpp"
#include "fracfv/csv.hpp"
#include "fracfv/errors.hpp"
#include "fracfv/experiments.hpp"

#include "test_support.hpp"

using namespace fracfv;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kGoodConfig = R"(
# drift-diffusion on (-10, 10)
dimension = 1
alpha = 1.5
beta = 1
R = 10
N = 100
dt = 0.1
t_final = 1.0
datum = uniform
snapshot_times = 0.5, 1.0
output_dir = out
)";

} // namespace

TEST_CASE("config parsing happy path") {
    const RunConfig cfg = parse_config(kGoodConfig);
    CHECK(cfg.dimension == 1);
    CHECK(cfg.alpha == 1.5);
    CHECK(cfg.N == 100);
    REQUIRE(cfg.t_final.has_value());
    CHECK(*cfg.t_final == 1.0);
    CHECK(cfg.snapshot_times.size() == 2);
    CHECK(cfg.datum.kind == DatumKind::Uniform);
}

TEST_CASE("config validation codes") {
    auto with = [&](const std::string& extra) {
        return std::string("dimension = 1\nalpha = 1.5\nR = 5\nN = 10\ndt = 0.1\nt_final = 1\n") +
               extra;
    };
    auto code_of = [](const std::string& text) -> std::string {
        try {
            parse_config(text);
            return "";
        } catch (const ConfigError& e) {
            return e.code;
        }
    };
    CHECK(code_of("dimension = 1\nalpha = 0.8\nR = 5\nN = 10\ndt = 0.1\nt_final = 1\n") ==
          "alpha-out-of-range-1d");
    CHECK(code_of("dimension = 2\nalpha = 0.8\nR = 5\nN = 10\ndt = 0.1\nt_final = 1\n") == "");
    CHECK(code_of("dimension = 2\nalpha = 0.8\nR = 5\nN = 10\ndt = 0.1\nt_final = 1\n"
                  "flux_order = 2\n") == "flux-order-2-requires-1d");
    CHECK(code_of(with("unknown_thing = 3\n")) == "unknown-key");
    CHECK(code_of(with("dt = 0\n")) == "dt-nonpositive"); // last duplicate key wins
    CHECK(code_of("dimension = 1\nalpha = 1.5\nR = 5\nN = 10\ndt = 0\nt_final = 1\n") ==
          "dt-nonpositive");
    CHECK(code_of("dimension = 1\nalpha = 1.5\nR = 5\nN = 10\ndt = 0.1\n") ==
          "missing-stop-rule");
    CHECK(code_of("dimension = 1\nalpha = 1.5\nR = 5\nN = 10\ndt = 0.1\nt_final = 1\n"
                  "steady_tol = 1e-8\n") == "steady-and-t-final");
    CHECK(code_of("dimension = 3\nalpha = 1.5\nR = 5\nN = 10\ndt = 0.1\nt_final = 1\n") ==
          "bad-dimension");
}

TEST_CASE("alpha = 1 maps to 1 + 1e-11 in one dimension") {
    const RunConfig cfg =
        parse_config("dimension = 1\nalpha = 1\nR = 5\nN = 10\ndt = 0.1\nt_final = 1\n");
    CHECK(cfg.alpha == 1.0 + kAlphaOneEpsilon);
    CHECK(cfg.alpha_adjusted);
    // in two dimensions alpha = 1 is valid as-is
    const RunConfig cfg2 =
        parse_config("dimension = 2\nalpha = 1\nR = 5\nN = 10\ndt = 0.1\nt_final = 1\n");
    CHECK(cfg2.alpha == 1.0);
    CHECK(!cfg2.alpha_adjusted);
}

TEST_CASE("datum parsing") {
    CHECK(parse_datum("uniform").kind == DatumKind::Uniform);
    CHECK(parse_datum("gaussian").kind == DatumKind::Gaussian);
    const Datum hk = parse_datum("heat-kernel-at(0.25)");
    CHECK(hk.kind == DatumKind::HeatKernelAt);
    CHECK(hk.t0 == 0.25);
    CHECK(parse_datum("fields/start.csv").kind == DatumKind::File);
    CHECK_THROWS_AS(parse_datum("heat-kernel-at(0)"), ConfigError);
}

TEST_CASE("csv emission formats") {
    const auto dir = testsupport::temp_dir("csv");

    SUBCASE("zero 1d field on two cells: header plus two rows") {
        const Field1D f = zero_field(build_grid_1d(1.0, 2));
        emit_csv(f, dir / "f.csv");
        const std::string text = slurp(dir / "f.csv");
        CHECK(text == "x,rho\n-0.5,0\n0.5,0\n");
    }
    SUBCASE("2d field rows are x-fastest") {
        Field2D f = zero_field(build_grid_2d(1.0, 2));
        f(0, 0) = 1.0;
        f(1, 0) = 2.0;
        f(0, 1) = 3.0;
        f(1, 1) = 4.0;
        emit_csv(f, dir / "g.csv");
        CHECK(slurp(dir / "g.csv") ==
              "x,y,rho\n-0.5,-0.5,1\n0.5,-0.5,2\n-0.5,0.5,3\n0.5,0.5,4\n");
    }
    SUBCASE("re-emission is bit-identical") {
        const Grid1D g = build_grid_1d(3.0, 37);
        const Field1D f{g, testsupport::random_vector(37, 11u, -1.0, 1.0)};
        emit_csv(f, dir / "a.csv");
        emit_csv(f, dir / "b.csv");
        CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    }
    SUBCASE("round-trip through a datum file") {
        const Grid1D g = build_grid_1d(2.0, 16);
        const Field1D f{g, testsupport::random_vector(16, 3u, 0.0, 2.0)};
        emit_csv(f, dir / "datum.csv");
        const Field1D back = make_datum(g, parse_datum((dir / "datum.csv").string()), 1.5);
        CHECK((back.values - f.values).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("shortest round-trip formatting") {
        CHECK(format_double(0.1) == "0.1");
        CHECK(format_double(1.0) == "1");
        CHECK(format_double(-2.5e-17) == "-2.5e-17");
        const double v = 0.1 + 0.2;
        CHECK(std::stod(format_double(v)) == v);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("experiment registry") {
    const auto& reg = experiment_registry();
    CHECK(reg.size() >= 11);
    bool has_conv = false;
    for (const auto& e : reg) has_conv = has_conv || e.name == "convergence-1d";
    CHECK(has_conv);
    try {
        run_experiment("does-not-exist", {}, testsupport::temp_dir("reg"), 1);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.code == "unknown-experiment");
        CHECK(std::string(e.what()).find("convergence-1d") != std::string::npos);
    }
}

TEST_CASE("run_single executes a small config end to end") {
    const auto dir = testsupport::temp_dir("single");
    RunConfig cfg;
    cfg.dimension = 1;
    cfg.alpha = 1.5;
    cfg.beta = 1.0;
    cfg.R = 5.0;
    cfg.N = 32;
    cfg.dt = 0.1;
    cfg.t_final = 1.0;
    cfg = validate_config(cfg);
    const auto summary = run_single(cfg, dir);
    CHECK(summary["steps"] == 10);
    CHECK(std::filesystem::exists(dir / "final_profile.csv"));
    CHECK(std::filesystem::exists(dir / "diagnostics.csv"));
    CHECK(std::filesystem::exists(dir / "summary.json"));
    CHECK(summary["mass"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));

    // same config, same bytes
    const auto dir2 = testsupport::temp_dir("single2");
    run_single(cfg, dir2);
    CHECK(slurp(dir / "final_profile.csv") == slurp(dir2 / "final_profile.csv"));
    std::filesystem::remove_all(dir);
    std::filesystem::remove_all(dir2);
}
