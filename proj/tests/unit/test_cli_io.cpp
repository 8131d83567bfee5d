#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "holowave/cli/commands.hpp"
#include "holowave/errors.hpp"

using namespace holowave;
using namespace holowave::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("holowave_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Data rows of a CSV, comment lines and header dropped.
std::vector<std::vector<double>> csv_rows(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::vector<std::vector<double>> out;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      double v = std::strtod(cell.c_str(), &end);
      row.push_back(end == cell.c_str() || *end ? NAN : v);  // text cells become NaN
    }
    out.push_back(row);
  }
  return out;
}

json small_run() {
  return json::parse(R"({
    "params": {"g": 1.0, "kappa": 0.01, "h": 2.0},
    "grid": {"n": 64, "length": 16.0},
    "initial": {"family": "multi_mode", "amplitude": 0.01, "modes": 3, "seed": 7},
    "run": {"t_final": 0.6},
    "diagnostics": {"cadence": 2, "oversample": 1, "strip_levels": 16}
  })");
}

}  // namespace

TEST_SUITE("cli_io") {
  TEST_CASE("config defaults are echoed and parse back unchanged") {
    RunConfig c = parse_run_config(json::object());
    json j = to_json(c);
    CHECK(j["format_version"] == kFormatVersion);
    CHECK(j["diagnostics"]["sigma"] == 0.45);
    CHECK(j["diagnostics"]["delta"] == 0.1);
    CHECK(to_json(parse_run_config(j)) == j);

    json deep = small_run();
    deep["params"]["h"] = "inf";
    RunConfig d = parse_run_config(deep);
    CHECK(is_infinite_depth(d.h));
    CHECK(to_json(d)["params"]["h"] == "inf");
  }

  TEST_CASE("unknown keys and bad values are config errors") {
    json j = small_run();
    j["params"]["kapa"] = 0.1;
    CHECK_THROWS_WITH_AS(parse_run_config(j), "unknown key params.kapa", ConfigError);
    j = small_run();
    j["extra"] = 1;
    CHECK_THROWS_AS(parse_run_config(j), ConfigError);
    for (const char* bad : {R"({"params": {"g": -1}})", R"({"params": {"h": "deep"}})",
                            R"({"grid": {"n": 63}})", R"({"initial": {"family": "soliton"}})",
                            R"({"diagnostics": {"sigma": 1.5}})", R"({"format_version": 2})",
                            R"({"diagnostics": {"windows": [1, "a"]}})", R"({"run": {"t_final": 0}})"}) {
      CAPTURE(bad);
      CHECK_THROWS_AS(parse_run_config(json::parse(bad)), ConfigError);
    }
  }

  TEST_CASE("initial data families") {
    RunConfig c = parse_run_config(small_run());
    c.initial.family = "flat";
    CHECK(initial_state(c).W.max_abs() == 0.0);

    c.initial.family = "gaussian_packet";
    auto [eta, psi] = eulerian_surface(initial_state(c));
    CHECK(eta.max_abs() == doctest::Approx(0.01).epsilon(1e-3));
    CHECK(psi.max_abs() <= 1e-15);

    c.initial.family = "multi_mode";
    auto a = initial_state(c), b = initial_state(c);
    CHECK((a.W - b.W).max_abs() == 0.0);
    c.initial.seed = 8;
    CHECK((initial_state(c).W - a.W).max_abs() > 1e-4);
  }

  TEST_CASE("progressive data travels right") {
    RunConfig c = parse_run_config(small_run());
    c.initial.family = "single_mode";
    c.initial.mode = 2;
    c.initial.amplitude = 1e-6;
    c.initial.progressive = true;
    const Grid g = c.grid();
    const double k = 2.0 * g.fundamental();
    const double amp = 1e-6 * dispersion_omega(k, c.params()) / (k * std::tanh(k * c.h));
    auto [eta, psi] = eulerian_surface(initial_state(c));
    auto ps = psi.real_samples();
    double err = 0.0;
    for (int i = 0; i < g.size(); ++i) err = std::max(err, std::abs(ps[i] - amp * std::sin(k * g.point(i))));
    CHECK(err <= 1e-9 * amp);

    c.initial.family = "gaussian_packet";
    c.initial.carrier = 2.0;
    c.initial.amplitude = 0.01;
    CHECK(momentum(initial_state(c)) > 0.0);
    c.initial.progressive = false;
    CHECK(std::abs(momentum(initial_state(c))) <= 1e-15);
  }

  TEST_CASE("flat data gives all-zero diagnostics") {
    json j = small_run();
    j["initial"]["family"] = "flat";
    auto dir = scratch("flat");
    auto r = run_simulate(parse_run_config(j), dir.string());
    CHECK(r.code == kExitOk);
    auto rows = csv_rows(dir / "diagnostics.csv");
    REQUIRE(rows.size() >= 3);
    for (const auto& row : rows)
      for (std::size_t i = 1; i < row.size(); ++i)
        if (!std::isnan(row[i])) CHECK(row[i] == 0.0);
  }

  TEST_CASE("same seed gives a bit-identical CSV; outputs embed the config") {
    RunConfig c = parse_run_config(small_run());
    auto d1 = scratch("seed1"), d2 = scratch("seed2");
    REQUIRE(run_simulate(c, d1.string()).code == kExitOk);
    REQUIRE(run_simulate(c, d2.string()).code == kExitOk);
    std::string csv = slurp(d1 / "diagnostics.csv");
    CHECK(csv == slurp(d2 / "diagnostics.csv"));
    CHECK(csv.find("# format_version: 1") != std::string::npos);
    CHECK(csv.find(to_json(c).dump()) != std::string::npos);
    auto report = json::parse(slurp(d1 / "report.jsonl"));
    CHECK(report["format_version"] == kFormatVersion);
    CHECK(report["config"] == to_json(c));
    CHECK(report["status"] == "ok");
    CHECK(report["norms"]["constant_defined"] == true);

    // Equally spaced records end exactly at t_final.
    auto rows = csv_rows(d1 / "diagnostics.csv");
    CHECK(rows.back()[0] == doctest::Approx(0.6).epsilon(1e-14));
    double dt0 = rows[1][0] - rows[0][0];
    CHECK(rows.back()[0] - rows[rows.size() - 2][0] == doctest::Approx(dt0).epsilon(1e-12));
  }

  TEST_CASE("kappa = 0 runs the pure-gravity path") {
    json j = small_run();
    j["params"]["kappa"] = 0.0;
    RunConfig c = parse_run_config(j);
    CHECK(c.params().kappa() == 0.0);
    auto s = initial_state(c);
    CHECK(energy_parts(s).capillary == 0.0);
    auto dir = scratch("gravity");
    CHECK(run_simulate(c, dir.string()).code == kExitOk);
    for (const auto& e : fs::directory_iterator(dir / "checkpoints"))
      CHECK(load_checkpoint(e.path().string()).params.kappa() == 0.0);
  }

  TEST_CASE("diagnose reproduces simulate from checkpoints") {
    RunConfig c = parse_run_config(small_run());
    auto sim = scratch("pipe_sim"), dia = scratch("pipe_dia");
    auto r = run_simulate(c, sim.string());
    REQUIRE(r.code == kExitOk);
    REQUIRE(run_diagnose(c, {(sim / "checkpoints").string()}, dia.string()) == kExitOk);
    auto a = csv_rows(sim / "diagnostics.csv"), b = csv_rows(dia / "diagnostics.csv");
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      REQUIRE(a[k].size() == b[k].size());
      for (std::size_t i = 0; i < a[k].size(); ++i) {
        if (std::isnan(a[k][i])) {
          CHECK(std::isnan(b[k][i]));
        } else {
          CHECK(std::abs(a[k][i] - b[k][i]) <= 1e-12 * std::max(1.0, std::abs(a[k][i])));
        }
      }
    }
    auto ra = json::parse(slurp(sim / "report.jsonl")), rb = json::parse(slurp(dia / "report.jsonl"));
    CHECK(ra["norms"]["constant"].get<double>() ==
          doctest::Approx(rb["norms"]["constant"].get<double>()).epsilon(1e-12));

    // Checkpoints are coefficient exact: write -> read -> write is byte identical.
    auto first = fs::path(r.checkpoints.front());
    auto copy = sim / "copy.chk";
    save_checkpoint(copy.string(), load_checkpoint(first.string()));
    CHECK(slurp(copy) == slurp(first));
  }

  TEST_CASE("diagnose without checkpoints reports no data") {
    auto empty = scratch("empty");
    fs::create_directories(empty);
    std::string message;
    CHECK(run_diagnose(RunConfig{}, {empty.string()}, (empty / "out").string(), &message) == kExitNoData);
    CHECK(message.find("no checkpoints") != std::string::npos);
    CHECK_THROWS_AS(run_diagnose(RunConfig{}, {(empty / "missing.chk").string()}, empty.string()), ConfigError);
  }

  TEST_CASE("blow-up keeps the last good state and exits 3") {
    json j = json::parse(R"({
      "params": {"h": 1.0}, "grid": {"n": 64, "length": 6.283185307179586},
      "initial": {"family": "single_mode", "mode": 4, "amplitude": 0.15},
      "run": {"t_final": 3.0}, "diagnostics": {"local_laws": false, "norms": false}
    })");
    auto dir = scratch("blowup");
    auto r = run_simulate(parse_run_config(j), dir.string());
    CHECK(r.code == kExitBlowUp);
    REQUIRE(fs::exists(dir / "checkpoints" / "blowup.chk"));
    auto last = load_checkpoint((dir / "checkpoints" / "blowup.chk").string());
    CHECK(last.t < 3.0);
    CHECK(last.W.max_abs() > 0.0);
    CHECK(json::parse(slurp(dir / "report.jsonl"))["status"] == "blowup");
  }

  TEST_CASE("verify: operator suite passes and a perturbed multiplier is named") {
    VerifyOptions o;
    auto checks = run_suite("operators", o);
    for (const auto& c : checks) {
      CAPTURE(c.name);
      CHECK(c.passed);
    }
    for (std::string op : {"tilbert", "neumann", "dirichlet", "projection"}) {
      o.perturbed = op;
      auto bad = run_suite("operators", o);
      for (const auto& c : bad) CHECK(c.passed == (c.op != op));
    }
    o.perturbed = "envelope";
    CHECK_FALSE(run_suite("envelope", o).front().passed);

    o.perturbed = "tilbert";
    std::ostringstream log;
    CHECK(run_verify("operators", o, scratch("verify").string(), log) == kExitVerification);
    CHECK(log.str().find("operator tilbert") != std::string::npos);
    o.perturbed = "laplacian";
    CHECK_THROWS_AS(run_suite("operators", o), ConfigError);
    CHECK_THROWS_AS(ToleranceProfile::named("sloppy"), ConfigError);
    CHECK(ToleranceProfile::named("loose").scale == 100.0);
  }

  TEST_CASE("verify: dispersion table rows carry relative errors") {
    VerifyOptions o;
    o.dispersion.n = 64;
    o.dispersion.periods = 2.0;
    o.dispersion.modes = {2};
    o.dispersion.kappas = {0.0, 0.01};
    o.dispersion.depths = {1.0};
    std::vector<DispersionRow> table;
    auto checks = run_suite("dispersion", o, &table);
    REQUIRE(table.size() == 2);
    for (const auto& r : table) {
      CHECK(r.omega_exact == doctest::Approx(std::sqrt(2.0 * std::tanh(2.0) * (1.0 + r.kappa * 4.0))));
      CHECK(r.rel_error <= 1e-4);
    }
    o.perturbed = "dispersion";
    for (const auto& c : run_suite("dispersion", o)) CHECK_FALSE(c.passed);
  }

  TEST_CASE("sweep over Bond numbers") {
    json j = json::parse(R"({
      "base": {"params": {"g": 2.0, "h": 3.0}, "grid": {"n": 64, "length": 24.0},
               "initial": {"family": "gaussian_packet", "width": 1.5},
               "run": {"t_final": 0.5},
               "diagnostics": {"cadence": 4, "local_laws": false, "oversample": 1, "strip_levels": 16}},
      "grid": {"bond": [1e-3, 1e-2, 1e-1], "epsilon": [0.01]}
    })");
    SweepConfig c = parse_sweep_config(j);
    auto points = expand(c);
    REQUIRE(points.size() == 3);
    for (const auto& p : points) CHECK(p.kappa == doctest::Approx(p.bond * 2.0 * 9.0));
    CHECK(points[2].bond == doctest::Approx(0.1));

    auto dir = scratch("sweep");
    std::ostringstream log;
    std::vector<SweepRow> rows;
    REQUIRE(run_sweep(c, dir.string(), 2, log, &rows) == kExitOk);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
      CHECK(r.status == "ok");
      CHECK(r.report.half.constant > 0.0);
      CHECK(r.report.full.constant >= r.report.half.constant * 0.5);
    }
    auto table = csv_rows(dir / "sweep.csv");
    REQUIRE(table.size() == 3);
    CHECK(table[1][4] == doctest::Approx(1e-2));
    CHECK(table[1][13] == doctest::Approx(rows[1].report.half.constant).epsilon(1e-12));
    for (int i = 0; i < 3; ++i) CHECK(fs::exists(dir / "runs" / ("point_000" + std::to_string(i) + ".jsonl")));

    // A serial pool gives the same table.
    auto serial = scratch("sweep_serial");
    REQUIRE(run_sweep(c, serial.string(), 1, log) == kExitOk);
    CHECK(slurp(serial / "sweep.csv") == slurp(dir / "sweep.csv"));

    j["grid"]["kappa"] = {0.1};
    CHECK_THROWS_AS(parse_sweep_config(j), ConfigError);
    j["grid"].erase("kappa");
    j["grid"]["h"] = {"inf"};
    CHECK_THROWS_AS(parse_sweep_config(j), ConfigError);
    j["grid"].erase("h");
    j["grid"]["mu"] = {1};
    CHECK_THROWS_AS(parse_sweep_config(j), ConfigError);
  }
}
