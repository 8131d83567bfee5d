#pragma once

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

namespace holowave::cli {

/// Scales every tolerance: default 1, strict 0.1, loose 100.
struct ToleranceProfile {
  std::string name = "default";
  double scale = 1.0;
  static ToleranceProfile named(const std::string& name);  // ConfigError if unknown
};

struct VerifyCheck {
  std::string suite;
  std::string name;
  std::string op;  // operator under test
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  nlohmann::json detail = nlohmann::json::object();
};

struct DispersionRow {
  double k = 0.0, g = 1.0, kappa = 0.0, h = 1.0;
  double omega_exact = 0.0, omega_measured = 0.0, rel_error = 0.0;
  int steps = 0;
};

struct DispersionOptions {
  int n = 256;
  double periods = 20.0;
  double amplitude = 1e-6;
  std::vector<int> modes = {1, 2, 4, 8};  // wavenumbers in units of 2 pi / L, L = 2 pi
  std::vector<double> kappas = {0.0, 0.01};
  std::vector<double> depths = {1.0, 5.0, std::numeric_limits<double>::infinity()};
};

/// Frequency of a linear travelling wave from the phase of its Fourier
/// coefficient after `periods` periods.
DispersionRow measure_dispersion(double k_index, double g, double kappa, double h,
                                 const DispersionOptions& options, double perturb = 1.0);
std::vector<DispersionRow> dispersion_table(const DispersionOptions& options, double perturb = 1.0);

struct VerifyOptions {
  ToleranceProfile profile;
  /// Test hook: the named operator's output is scaled by 1.01 before it is
  /// compared with its oracle. One of tilbert, neumann, dirichlet,
  /// projection, dispersion, envelope.
  std::string perturbed;
  DispersionOptions dispersion;
};

/// Suites: operators, dispersion, envelope; "all" runs every one.
std::vector<std::string> suite_names();
std::vector<VerifyCheck> run_suite(const std::string& suite, const VerifyOptions& options,
                                   std::vector<DispersionRow>* table = nullptr);

nlohmann::json to_json(const VerifyCheck& c);
nlohmann::json to_json(const DispersionRow& r);

}  // namespace holowave::cli
