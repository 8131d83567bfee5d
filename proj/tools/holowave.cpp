// holowave: simulate | verify | diagnose | sweep
#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "holowave/cli/commands.hpp"
#include "holowave/errors.hpp"

using namespace holowave;
using namespace holowave::cli;

namespace {

struct Common {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string profile = "default";
};

void add_common(CLI::App* app, Common& c, bool needs_config) {
  auto* opt = app->add_option("--config", c.config, "JSON config file (schema in config/schema.json)");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "output directory")->capture_default_str();
  app->add_option("--seed", c.seed, "overrides initial.seed");
  app->add_option("--jobs", c.jobs, "worker threads (0: all cores)")->capture_default_str();
  app->add_option("--tolerance-profile", c.profile, "default | strict | loose")->capture_default_str();
}

int simulate_cmd(const Common& c) {
  RunConfig cfg = load_run_config(c.config);
  if (c.seed) cfg.initial.seed = *c.seed;
  auto r = run_simulate(cfg, c.out);
  if (r.code == kExitBlowUp) std::cerr << "blow-up: " << r.message << " (last state in " << c.out << "/checkpoints/blowup.chk)\n";
  return r.code;
}

int diagnose_cmd(const Common& c, const std::vector<std::string>& inputs) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_run_config(c.config);
  std::string message;
  auto code = run_diagnose(cfg, inputs, c.out, &message);
  if (code == kExitNoData) std::cerr << "ExitNoData: " << message << "\n";
  return code;
}

int verify_cmd(const Common& c, const std::string& suite, const std::string& perturb) {
  VerifyOptions o;
  o.profile = ToleranceProfile::named(c.profile);
  o.perturbed = perturb;
  return run_verify(suite, o, c.out, std::cout);
}

int sweep_cmd(const Common& c) {
  SweepConfig cfg = load_sweep_config(c.config);
  if (c.seed && cfg.seeds.empty()) cfg.base.initial.seed = *c.seed;
  return run_sweep(cfg, c.out, c.jobs, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gravity-capillary water waves in holomorphic coordinates"};
  app.require_subcommand(1);

  Common sim_opts, ver_opts, dia_opts, swp_opts;
  auto* sim = app.add_subcommand("simulate", "run one simulation with diagnostics and checkpoints");
  add_common(sim, sim_opts, true);

  auto* ver = app.add_subcommand("verify", "check operators and dispersion against independent oracles");
  add_common(ver, ver_opts, false);
  std::string suite = "operators", perturb;
  ver->add_option("--suite", suite, "operators | dispersion | envelope | all")->capture_default_str();
  ver->add_option("--perturb", perturb, "test hook: scale one operator by 1.01")->group("");

  auto* dia = app.add_subcommand("diagnose", "recompute diagnostics and norms from checkpoints");
  add_common(dia, dia_opts, false);
  std::vector<std::string> inputs;
  dia->add_option("checkpoints", inputs, "checkpoint files or directories");

  auto* swp = app.add_subcommand("sweep", "empirical constant over a parameter grid");
  add_common(swp, swp_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sim) return simulate_cmd(sim_opts);
    if (*ver) return verify_cmd(ver_opts, suite, perturb);
    if (*dia) return diagnose_cmd(dia_opts, inputs);
    if (*swp) return sweep_cmd(swp_opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BlowUp& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    return kExitBlowUp;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
