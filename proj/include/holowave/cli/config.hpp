#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "holowave/evolution.hpp"
#include "holowave/morawetz.hpp"

namespace holowave::cli {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;

struct InitialData {
  std::string family = "gaussian_packet";  // flat | single_mode | multi_mode | gaussian_packet
  double amplitude = 0.01;
  int mode = 1;             // single_mode: wavenumber index
  bool progressive = false; // psi of the linear right-moving wave (otherwise psi = 0)
  int modes = 4;            // multi_mode: indices 1..modes
  double width = 2.0;       // gaussian_packet
  double center = -1.0;     // gaussian_packet: negative means L/2
  double carrier = 0.0;     // gaussian_packet: carrier wavenumber
  std::uint64_t seed = 0;
};

struct Diagnostics {
  int cadence = 10;                    // steps between records
  bool local_laws = true;              // density/flux pairs and residuals
  std::vector<double> windows = {};    // Morawetz window centres; empty means {L/2}
  double sigma = 0.45;
  double delta = 0.1;
  double epsilon0 = 0.1;
  double spacing = 0.5;
  int oversample = 0;
  int strip_levels = 64;
  bool norms = true;                   // NormReport at the end of the run
};

struct RunConfig {
  double g = 1.0, kappa = 0.0, h = 1.0;
  int n = 256;
  double length = 20.0;
  InitialData initial;
  StepperConfig stepper;
  double t_final = 1.0;
  Diagnostics diagnostics;
  int checkpoint_every = 1;  // records between checkpoints; 0 keeps only the last

  PhysicalParams params() const { return PhysicalParams(g, kappa, h); }
  Grid grid() const { return Grid(n, length); }
  NormOptions norm_options() const;
  std::vector<double> window_centers() const;
};

/// Parses and validates a run config; unknown keys and invalid values
/// raise ConfigError naming the offending path.
RunConfig parse_run_config(const json& j);
RunConfig load_run_config(const std::string& path);
/// Every field, defaults included.
json to_json(const RunConfig& c);

WaveState initial_state(const RunConfig& c);

struct SweepConfig {
  RunConfig base;
  std::vector<double> g, kappa, bond, h, epsilon;
  std::vector<std::uint64_t> seeds;
};

/// One row of the sweep grid.
struct SweepPoint {
  int index = 0;
  double g = 1.0, kappa = 0.0, h = 1.0, bond = 0.0, epsilon = 0.0;
  std::uint64_t seed = 0;
  RunConfig config;
};

SweepConfig parse_sweep_config(const json& j);
SweepConfig load_sweep_config(const std::string& path);
json to_json(const SweepConfig& c);

/// Cartesian product in the order g, kappa | bond, h, epsilon, seed. With a
/// bond list kappa = bond g h^2 (finite depth only).
std::vector<SweepPoint> expand(const SweepConfig& c);

/// Depth as written in configs: a number or "inf".
double parse_depth(const json& j, const std::string& path);
json depth_to_json(double h);

}  // namespace holowave::cli
