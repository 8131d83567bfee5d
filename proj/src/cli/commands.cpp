#include "holowave/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>

#include "holowave/conservation.hpp"
#include "holowave/errors.hpp"
#include "holowave/parallel.hpp"

namespace holowave::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return format_number(v); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
}

json header_json(const json& config, const std::string& kind) {
  return json{{"format_version", kFormatVersion}, {"kind", kind}, {"config", config}};
}

// Entries that were not computed are NaN and are skipped.
bool all_finite(const DiagnosticsRecord& r, bool local_laws) {
  auto ok = [](double v) { return std::isfinite(v); };
  for (double v : r.bands) if (!ok(v)) return false;
  if (!ok(r.t) || !ok(r.hamiltonian) || !ok(r.momentum) || !ok(r.mass)) return false;
  if (!local_laws) return true;
  for (double v : r.integral) if (!ok(v)) return false;
  for (double v : r.morawetz) if (!ok(v)) return false;
  for (double v : r.flux) if (!ok(v)) return false;
  return true;
}

// Step size no larger than the configured one with `horizon` a whole number
// of records: horizon = m * cadence * dt.
StepperConfig aligned_stepper(const RunConfig& c, const WaveState& s0, double horizon) {
  const int cadence = c.diagnostics.cadence;
  double dt0 = resolve_dt(c.stepper, s0);
  long m = std::max(1L, static_cast<long>(std::ceil(horizon / (cadence * dt0) - 1e-9)));
  StepperConfig stepper = c.stepper;
  stepper.dt = horizon / static_cast<double>(m * cadence);
  return stepper;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::string& title, const json& config,
               const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows) {
  fs::path p(path);
  if (p.has_parent_path()) ensure_dir(p.parent_path());
  std::ostringstream out;
  out << "# " << title << "\n# format_version: " << kFormatVersion << "\n# config: " << config.dump() << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << num(r[i]);
    out << "\n";
  }
  write_text(p, out.str());
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

DiagnosticsRecorder::DiagnosticsRecorder(const RunConfig& config) : config_(config) {
  for (double x0 : config.window_centers()) windows_.emplace_back(x0, config.length);
}

std::vector<std::string> DiagnosticsRecorder::columns() const {
  std::vector<std::string> c = {"t", "hamiltonian", "momentum", "mass", "level",
                                "int_I1", "int_I2", "int_I3",
                                "residual1", "residual2", "residual3",
                                "flux_scale1", "flux_scale2", "flux_scale3"};
  for (std::size_t w = 0; w < windows_.size(); ++w) {
    c.push_back("morawetz" + std::to_string(w));
    c.push_back("flux" + std::to_string(w));
  }
  LittlewoodPaley lp(config_.grid(), config_.h);
  for (int j = 0; j < lp.band_count(); ++j) c.push_back("band" + std::to_string(j));
  return c;
}

void DiagnosticsRecorder::push(const WaveState& state) {
  if (!records_.empty() && !(state.t > records_.back().t))
    throw InvalidArgument("diagnostics need strictly increasing times");
  DiagnosticsRecord r;
  r.t = state.t;
  r.hamiltonian = hamiltonian(state);
  r.momentum = momentum(state);
  r.level = state.level;
  auto [eta, psi] = eulerian_surface(state);
  r.mass = eta.integral().real();
  r.bands = band_norms(eta, psi.derivative(), state.params);
  r.residual.fill(kNaN);
  r.integral.fill(kNaN);
  r.flux_scale.fill(kNaN);
  r.morawetz.assign(windows_.size(), kNaN);
  r.flux.assign(windows_.size(), kNaN);

  if (config_.diagnostics.local_laws) {
    auto pairs = all_pairs(state);
    for (int j = 0; j < 3; ++j) {
      r.integral[j] = pairs[j].integral();
      r.flux_scale[j] = flux_scale(pairs[j]);
    }
    for (std::size_t w = 0; w < windows_.size(); ++w) {
      auto terms = morawetz_terms(pairs, windows_[w], config_.diagnostics.sigma);
      r.morawetz[w] = terms.functional;
      r.flux[w] = terms.flux;
    }
    recent_.push_back(std::move(pairs));
    if (recent_.size() == 3) {
      auto& mid = records_.back();
      for (int j = 0; j < 3; ++j) mid.residual[j] = residual(recent_[0][j], recent_[1][j], recent_[2][j]).l2;
      recent_.erase(recent_.begin());
    }
  }
  if (!all_finite(r, config_.diagnostics.local_laws)) throw BlowUp("non-finite diagnostics at t = " + num(state.t));
  records_.push_back(std::move(r));
}

void write_diagnostics_csv(std::ostream& out, const DiagnosticsRecorder& recorder, const json& config) {
  out << "# holowave diagnostics\n";
  out << "# format_version: " << kFormatVersion << "\n";
  out << "# config: " << config.dump() << "\n";
  auto cols = recorder.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& r : recorder.records()) {
    std::vector<double> v = {r.t, r.hamiltonian, r.momentum, r.mass, r.level};
    v.insert(v.end(), r.integral.begin(), r.integral.end());
    v.insert(v.end(), r.residual.begin(), r.residual.end());
    v.insert(v.end(), r.flux_scale.begin(), r.flux_scale.end());
    for (std::size_t w = 0; w < r.morawetz.size(); ++w) {
      v.push_back(r.morawetz[w]);
      v.push_back(r.flux[w]);
    }
    v.insert(v.end(), r.bands.begin(), r.bands.end());
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << num(v[i]);
    out << "\n";
  }
}

json to_json(const NormReport& r) {
  auto maybe = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return json{
      {"le_squared", r.le.squared},
      {"le_center", r.le.center},
      {"le_per_center", r.le.per_center},
      {"centers", r.le.centers},
      {"e14_initial_squared", r.e14_initial.squared()},
      {"e14_final_squared", r.e14_final.squared()},
      {"e14_initial",
       {{"eta_gravity", r.e14_initial.eta_gravity},
        {"eta_capillary", r.e14_initial.eta_capillary},
        {"psi", r.e14_initial.psi}}},
      {"e0", r.e0},
      {"xkappa",
       {{"total", r.xkappa.total()},
        {"x", r.xkappa.x},
        {"x1", r.xkappa.x1},
        {"lambdas", r.xkappa.lambdas},
        {"bands", r.xkappa.bands}}},
      {"envelope", r.envelope},
      {"constant", maybe(r.constant)},
      {"constant_defined", r.constant_defined},
      {"gate_passed", r.gate_passed},
      {"momentum_ratio", r.momentum_ratio},
  };
}

// ---------------------------------------------------------------------------
// simulate / diagnose
// ---------------------------------------------------------------------------

namespace {

void write_outputs(const fs::path& dir, const RunConfig& config, const DiagnosticsRecorder& rec,
                   const std::vector<WaveState>& trajectory, json status) {
  const json cj = to_json(config);
  {
    std::ostringstream csv;
    write_diagnostics_csv(csv, rec, cj);
    write_text(dir / "diagnostics.csv", csv.str());
  }
  json line = header_json(cj, "run");
  line.update(status);
  if (config.diagnostics.norms && trajectory.size() >= 2) {
    try {
      line["norms"] = to_json(empirical_constant(trajectory, config.norm_options()));
    } catch (const Error& e) {
      line["norms_error"] = e.what();
    }
  }
  write_text(dir / "report.jsonl", line.dump() + "\n");
}

}  // namespace

SimulateResult run_simulate(const RunConfig& config, const std::string& out_dir) {
  SimulateResult result;
  const fs::path dir(out_dir);
  ensure_dir(dir / "checkpoints");
  write_text(dir / "config.json", to_json(config).dump(2) + "\n");

  DiagnosticsRecorder rec(config);
  std::vector<WaveState> kept;
  std::optional<WaveState> last_good;
  int record = 0;
  auto checkpoint = [&](const WaveState& s, const std::string& name) {
    auto path = (dir / "checkpoints" / name).string();
    save_checkpoint(path, s);
    result.checkpoints.push_back(path);
  };
  auto hook = [&](const WaveState& s) {
    rec.push(s);
    last_good = s;
    if (config.diagnostics.norms) kept.push_back(s);
    char name[32];
    std::snprintf(name, sizeof name, "rec_%06d.chk", record);
    if (config.checkpoint_every > 0 && record % config.checkpoint_every == 0) checkpoint(s, name);
    ++record;
  };

  WaveState initial = initial_state(config);
  SimulateOptions so;
  so.t_final = config.t_final;
  so.cadence = config.diagnostics.cadence;
  so.keep_snapshots = false;
  so.blowup_checkpoint = (dir / "checkpoints" / "blowup.chk").string();

  json status;
  try {
    auto traj = simulate(initial, aligned_stepper(config, initial, config.t_final), so, hook);
    status = {{"status", "ok"}, {"steps", traj.steps}, {"dt", traj.dt}};
    if (last_good && config.checkpoint_every == 0) checkpoint(*last_good, "final.chk");
    if (last_good && config.checkpoint_every > 0 && (record - 1) % config.checkpoint_every != 0) {
      char name[32];
      std::snprintf(name, sizeof name, "rec_%06d.chk", record - 1);
      checkpoint(*last_good, name);
    }
  } catch (const BlowUp& e) {
    result.code = kExitBlowUp;
    result.message = e.what();
    status = {{"status", "blowup"}, {"message", e.what()}};
    if (!fs::exists(so.blowup_checkpoint) && last_good) save_checkpoint(so.blowup_checkpoint, *last_good);
    result.checkpoints.push_back(so.blowup_checkpoint);
  }
  write_outputs(dir, config, rec, kept, status);
  return result;
}

ExitCode run_diagnose(const RunConfig& config, const std::vector<std::string>& inputs,
                      const std::string& out_dir, std::string* message) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    fs::path p(in);
    if (fs::is_directory(p)) {
      for (const auto& e : fs::directory_iterator(p))
        if (e.path().extension() == ".chk" && e.path().filename() != "blowup.chk") files.push_back(e.path());
    } else if (fs::exists(p)) {
      files.push_back(p);
    } else {
      throw ConfigError("no such checkpoint " + in);
    }
  }
  std::vector<WaveState> states;
  for (const auto& f : files) states.push_back(load_checkpoint(f.string()));
  std::sort(states.begin(), states.end(), [](const WaveState& a, const WaveState& b) { return a.t < b.t; });
  states.erase(std::unique(states.begin(), states.end(),
                           [](const WaveState& a, const WaveState& b) { return a.t == b.t; }),
               states.end());
  if (states.empty()) {
    if (message) *message = "no checkpoints to diagnose";
    return kExitNoData;
  }
  RunConfig effective = config;
  const auto& s0 = states.front();
  effective.g = s0.params.g();
  effective.kappa = s0.params.kappa();
  effective.h = s0.params.h();
  effective.n = s0.grid().size();
  effective.length = s0.grid().length();

  const fs::path dir(out_dir);
  ensure_dir(dir);
  DiagnosticsRecorder rec(effective);
  for (const auto& s : states) rec.push(s);
  write_outputs(dir, effective, rec, states,
                {{"status", "ok"}, {"source", "checkpoints"}, {"snapshots", states.size()}});
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

ExitCode run_verify(const std::string& suite, const VerifyOptions& options, const std::string& out_dir,
                    std::ostream& log) {
  std::vector<DispersionRow> table;
  auto checks = run_suite(suite, options, &table);
  const fs::path dir(out_dir);
  ensure_dir(dir);

  json cfg = {{"suite", suite}, {"tolerance_profile", options.profile.name},
              {"perturbed", options.perturbed}};
  std::string lines = header_json(cfg, "verify").dump() + "\n";
  bool ok = true;
  for (const auto& c : checks) {
    lines += to_json(c).dump() + "\n";
    ok = ok && c.passed;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-4s %-10s %-32s %-11s measured %.3e  tolerance %.1e\n",
                  c.passed ? "PASS" : "FAIL", c.suite.c_str(), c.name.c_str(), c.op.c_str(), c.measured,
                  c.tolerance);
    log << buf;
  }
  write_text(dir / "verify.jsonl", lines);

  if (!table.empty()) {
    std::ostringstream csv;
    csv << "# holowave dispersion\n# format_version: " << kFormatVersion << "\n# config: " << cfg.dump()
        << "\nk,g,kappa,h,omega_exact,omega_measured,rel_error,steps\n";
    for (const auto& r : table)
      csv << num(r.k) << "," << num(r.g) << "," << num(r.kappa) << "," << num(r.h) << ","
          << num(r.omega_exact) << "," << num(r.omega_measured) << "," << num(r.rel_error) << ","
          << r.steps << "\n";
    write_text(dir / "dispersion.csv", csv.str());
  }
  for (const auto& c : checks)
    if (!c.passed) log << "verification failed: operator " << c.op << " (" << c.name << ")\n";
  return ok ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

SweepRow run_sweep_point(const SweepPoint& point) {
  SweepRow row;
  row.point = point;
  const RunConfig& c = point.config;
  try {
    WaveState s0 = initial_state(c);
    // T falls on a record, so the first half of the run is the T report.
    SimulateOptions so;
    so.t_final = 2.0 * c.t_final;
    so.cadence = c.diagnostics.cadence;
    auto traj = simulate(s0, aligned_stepper(c, s0, c.t_final), so);
    row.dt = traj.dt;
    row.steps = traj.steps;
    row.report = doubling_report(traj.snapshots, c.norm_options());
  } catch (const BlowUp& e) {
    row.status = "blowup";
    row.message = e.what();
  } catch (const Error& e) {
    row.status = "error";
    row.message = e.what();
  }
  return row;
}

std::vector<std::string> sweep_columns() {
  return {"index", "g", "kappa", "h", "bond", "epsilon", "seed", "status", "gate", "xkappa",
          "le2_T", "e14_0_sq", "e14_T_sq", "C_T", "le2_2T", "e14_2T_sq", "C_2T", "C_change"};
}

namespace {

std::vector<std::string> sweep_values(const SweepRow& r) {
  const auto& p = r.point;
  const bool ok = r.status == "ok";
  const auto& a = r.report.half;
  const auto& b = r.report.full;
  auto v = [&](double x) { return num(ok ? x : kNaN); };
  return {std::to_string(p.index), num(p.g), num(p.kappa), num(p.h), num(p.bond), num(p.epsilon),
          std::to_string(p.seed), r.status, ok ? (b.gate_passed ? "1" : "0") : "nan",
          v(b.xkappa.total()), v(a.le.squared), v(a.e14_initial.squared()), v(a.e14_final.squared()),
          v(a.constant), v(b.le.squared), v(b.e14_final.squared()), v(b.constant),
          v(ok ? r.report.change() : kNaN)};
}

}  // namespace

json to_json(const SweepRow& r) {
  json j = {{"index", r.point.index}, {"g", r.point.g}, {"kappa", r.point.kappa},
            {"h", depth_to_json(r.point.h)}, {"bond", r.point.bond}, {"epsilon", r.point.epsilon},
            {"seed", r.point.seed}, {"status", r.status}, {"dt", r.dt}, {"steps", r.steps},
            {"config", to_json(r.point.config)}};
  if (r.status == "ok") {
    j["report_T"] = to_json(r.report.half);
    j["report_2T"] = to_json(r.report.full);
    j["C_change"] = r.report.change();
  } else {
    j["message"] = r.message;
  }
  return j;
}

ExitCode run_sweep(const SweepConfig& config, const std::string& out_dir, int jobs, std::ostream& log,
                   std::vector<SweepRow>* rows_out) {
  auto points = expand(config);
  const fs::path dir(out_dir);
  ensure_dir(dir / "runs");
  const json cj = to_json(config);
  write_text(dir / "config.json", cj.dump(2) + "\n");

  std::vector<SweepRow> rows(points.size());
  std::mutex log_mutex;
  parallel_for(static_cast<int>(points.size()), jobs, [&](int i) {
    rows[i] = run_sweep_point(points[i]);
    char name[32];
    std::snprintf(name, sizeof name, "point_%04d.jsonl", i);
    write_text(dir / "runs" / name, to_json(rows[i]).dump() + "\n");
    std::lock_guard lock(log_mutex);
    log << "sweep point " << i + 1 << "/" << points.size() << " bond " << num(points[i].bond) << " epsilon "
        << num(points[i].epsilon) << ": " << rows[i].status;
    if (rows[i].status == "ok") log << ", C(T) " << num(rows[i].report.half.constant) << ", C(2T) "
                                    << num(rows[i].report.full.constant);
    log << "\n";
  });

  std::ostringstream csv, jsonl;
  csv << "# holowave sweep\n# format_version: " << kFormatVersion << "\n# config: " << cj.dump() << "\n";
  auto cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) csv << (i ? "," : "") << cols[i];
  csv << "\n";
  jsonl << header_json(cj, "sweep").dump() << "\n";
  for (const auto& r : rows) {
    auto v = sweep_values(r);
    for (std::size_t i = 0; i < v.size(); ++i) csv << (i ? "," : "") << v[i];
    csv << "\n";
    jsonl << to_json(r).dump() << "\n";
  }
  write_text(dir / "sweep.csv", csv.str());
  write_text(dir / "sweep.jsonl", jsonl.str());
  if (rows_out) *rows_out = std::move(rows);
  return kExitOk;
}

}  // namespace holowave::cli
