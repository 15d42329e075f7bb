// Experiment harness for the deadline-constrained DVFS scheduling simulator.
//
// Subcommands:
//   validate-config  parse and validate a config, print a summary
//   compare          DV-DVFS vs DVO over every (scenario, seed)
//   sweep-variety    the comparison repeated across the z_sweep exponents
//   sweep-deadline   the comparison across deadline scenarios, with the
//                    larger-deadline-never-costs-more check
//
// Exit codes: 0 success, 1 error, 2 a requested scenario was entirely
// infeasible (or the deadline sweep's monotonicity check failed).

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dvfsim/config.hpp"
#include "dvfsim/experiment.hpp"
#include "dvfsim/report.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string format = "csv";
  std::string mode;
  std::vector<std::uint64_t> seeds;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Path to the experiment config")
      ->required();
  cmd->add_option("--out", opts.out_dir, "Output directory")
      ->envname("DVFSIM_OUT");
  cmd->add_option("--format", opts.format, "Report format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--mode", opts.mode,
                  "Energy accounting override: slot-average|busy-literal")
      ->check(CLI::IsMember({"slot-average", "busy-literal"}));
  cmd->add_option("--seeds", opts.seeds, "Seed list override")->delimiter(',');
}

dvfsim::ExperimentConfig load(const CommonOpts& opts) {
  dvfsim::ExperimentConfig cfg = dvfsim::load_config(opts.config_path);
  if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
  if (!opts.mode.empty()) cfg.energy_mode = dvfsim::parse_energy_mode(opts.mode);
  if (!opts.seeds.empty()) cfg.seeds = opts.seeds;
  return cfg;
}

int emit(const dvfsim::SweepReport& report, const dvfsim::ExperimentConfig& cfg,
         const CommonOpts& opts, bool require_monotone) {
  const auto paths = dvfsim::emit_report(
      report, dvfsim::parse_report_format(opts.format), cfg.output_dir);
  for (const auto& p : paths) std::printf("wrote %s\n", p.c_str());
  for (const auto& s : report.infeasible_scenarios) {
    std::fprintf(stderr, "scenario '%s' is entirely infeasible\n", s.c_str());
  }
  if (require_monotone && !report.deadline_monotone_ok) {
    std::fprintf(stderr, "deadline monotonicity violated: a larger deadline "
                         "produced more energy\n");
    return 2;
  }
  return report.infeasible_scenarios.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deadline-constrained, variety-aware DVFS scheduling simulator"};
  app.require_subcommand(1);

  CommonOpts opts;
  CLI::App* validate = app.add_subcommand("validate-config",
                                          "Parse and validate a config file");
  std::string validate_path;
  validate->add_option("--config", validate_path, "Path to the experiment config")
      ->required();

  CLI::App* cmp = app.add_subcommand("compare", "DV-DVFS vs DVO comparison");
  CLI::App* variety = app.add_subcommand("sweep-variety",
                                         "Sensitivity sweep across z exponents");
  CLI::App* deadline = app.add_subcommand("sweep-deadline",
                                          "Sensitivity sweep across deadlines");
  add_common(cmp, opts);
  add_common(variety, opts);
  add_common(deadline, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      const dvfsim::ExperimentConfig cfg = dvfsim::load_config(validate_path);
      std::printf("config ok: %zu blocks, %zu scenario(s), %zu seed(s), mode %s\n",
                  cfg.workload.n_blocks, cfg.deadline_scenarios.size(),
                  cfg.seeds.size(),
                  dvfsim::energy_mode_name(cfg.energy_mode).c_str());
      return 0;
    }
    const dvfsim::ExperimentConfig cfg = load(opts);
    if (cmp->parsed()) {
      return emit(dvfsim::run_comparison(cfg), cfg, opts, false);
    }
    if (variety->parsed()) {
      return emit(dvfsim::run_variety_sweep(cfg), cfg, opts, false);
    }
    if (deadline->parsed()) {
      return emit(dvfsim::run_deadline_sweep(cfg), cfg, opts, true);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
