#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "holowave/cli/config.hpp"
#include "holowave/cli/verify.hpp"

namespace holowave::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,       // unexpected internal error
  kExitConfig = 2,
  kExitBlowUp = 3,
  kExitVerification = 4,
  kExitNoData = 5,        // diagnose found no checkpoints
};

/// %.17g, with nan and inf spelled out.
std::string format_number(double v);

/// CSV with the standard comment header (title, format version, config as
/// one JSON line) followed by the column row.
void write_csv(const std::string& path, const std::string& title, const nlohmann::json& config,
               const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows);

/// One row of diagnostics.csv.
struct DiagnosticsRecord {
  double t = 0.0;
  double hamiltonian = 0.0, momentum = 0.0, mass = 0.0, level = 0.0;
  std::array<double, 3> integral{};      // int I_j dx
  std::array<double, 3> residual{};      // L2 of d_t I_j + d_x S_j, NaN at the ends
  std::array<double, 3> flux_scale{};    // L2 of d_x S_j
  std::vector<double> morawetz, flux;    // per window
  std::vector<double> bands;             // X_0 norm per Littlewood-Paley band
};

/// Builds records from states pushed in time order. Residuals use centered
/// differences, so record k is complete once record k + 1 has been pushed.
class DiagnosticsRecorder {
 public:
  explicit DiagnosticsRecorder(const RunConfig& config);
  void push(const WaveState& state);
  const std::vector<DiagnosticsRecord>& records() const { return records_; }
  std::vector<std::string> columns() const;

 private:
  RunConfig config_;
  std::vector<WindowMultiplier> windows_;
  std::vector<DiagnosticsRecord> records_;
  std::vector<std::array<DensityFluxPair, 3>> recent_;  // last two pair sets
};

/// CSV with a comment header carrying the format version and the effective
/// config as one JSON line.
void write_diagnostics_csv(std::ostream& out, const DiagnosticsRecorder& recorder,
                           const nlohmann::json& config);
nlohmann::json to_json(const NormReport& r);

struct SimulateResult {
  ExitCode code = kExitOk;
  std::string message;
  std::vector<std::string> checkpoints;
};

/// Runs one simulation into `out_dir`: config.json, diagnostics.csv,
/// report.jsonl and checkpoints/. A blow-up keeps the last good state in
/// checkpoints/blowup.chk and returns kExitBlowUp.
SimulateResult run_simulate(const RunConfig& config, const std::string& out_dir);

/// Recomputes diagnostics.csv and report.jsonl from checkpoints (files or
/// directories, ordered by time). kExitNoData when there are none.
ExitCode run_diagnose(const RunConfig& config, const std::vector<std::string>& inputs,
                      const std::string& out_dir, std::string* message = nullptr);

/// Verification suites into verify.jsonl (and dispersion.csv); prints one
/// line per check to `log`.
ExitCode run_verify(const std::string& suite, const VerifyOptions& options,
                    const std::string& out_dir, std::ostream& log);

struct SweepRow {
  SweepPoint point;
  std::string status = "ok";  // ok | blowup | error
  std::string message;
  DoublingReport report;
  double dt = 0.0;
  long steps = 0;
};

/// Runs one sweep point to 2T (T = base.run.t_final) and reports C at T and 2T.
SweepRow run_sweep_point(const SweepPoint& point);

/// Work pool over the sweep points; each job writes runs/point_NNNN.jsonl,
/// then sweep.csv and sweep.jsonl collect the rows in index order.
ExitCode run_sweep(const SweepConfig& config, const std::string& out_dir, int jobs,
                   std::ostream& log, std::vector<SweepRow>* rows = nullptr);

std::vector<std::string> sweep_columns();
nlohmann::json to_json(const SweepRow& row);

}  // namespace holowave::cli
