#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dvfsim/config.hpp"
#include "dvfsim/planner.hpp"
#include "dvfsim/sim.hpp"
#include "dvfsim/workload.hpp"

namespace dvfsim {

struct SweepRow {
  std::string scenario;
  double z = 0.0;
  std::uint64_t seed = 0;
  double ec_dvfs = 0.0;
  double ec_dvo = 0.0;
  double ft_dvfs = 0.0;
  double ft_dvo = 0.0;
  double savings_pct = 0.0;
  double time_increase_pct = 0.0;
  bool dvfs_deadline_met = false;
  bool dvo_deadline_met = false;
  bool dvfs_feasible = false;
};

/// Per-(scenario, z) means, normalized to the DVO baseline.
struct SweepAggregate {
  std::string scenario;
  double z = 0.0;
  std::size_t runs = 0;
  double norm_energy_dvfs = 0.0;
  double norm_energy_dvo = 1.0;
  double norm_time_dvfs = 0.0;
  double norm_time_dvo = 1.0;
  double mean_savings_pct = 0.0;
  double mean_time_increase_pct = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<SweepAggregate> aggregates;
  std::vector<std::string> infeasible_scenarios;  // no seed produced a feasible plan
  bool deadline_monotone_ok = true;  // larger deadline never costs more energy
};

/// One full pipeline run: generate, plan, schedule both ways, simulate,
/// compare.
inline SweepRow run_single(const ExperimentConfig& cfg,
                           const DeadlineScenario& scenario, double z,
                           std::uint64_t seed) {
  WorkloadSpec spec = cfg.workload;
  spec.zipf.z = z;
  spec.zipf.n = spec.n_blocks;
  spec.rng_seed = seed;

  const std::vector<DataBlock> blocks = generate_blocks(spec);
  const SlotPlan plan =
      plan_slots(scenario.deadline_s, spec.n_blocks, cfg.error_margin);

  const Schedule dvfs = schedule_dv_dvfs(blocks, plan, cfg.server,
                                         cfg.sampling_fraction, cfg.energy_mode,
                                         seed);
  const Schedule dvo = schedule_dvo(blocks, plan, cfg.server, cfg.energy_mode);

  const SimulationResult sim_dvfs =
      execute(dvfs, blocks, cfg.server, cfg.energy_mode);
  const SimulationResult sim_dvo =
      execute(dvo, blocks, cfg.server, cfg.energy_mode);
  const ComparisonReport cmp = compare(sim_dvfs, sim_dvo);

  SweepRow row;
  row.scenario = scenario.label;
  row.z = z;
  row.seed = seed;
  row.ec_dvfs = sim_dvfs.total_energy;
  row.ec_dvo = sim_dvo.total_energy;
  row.ft_dvfs = sim_dvfs.finish_time;
  row.ft_dvo = sim_dvo.finish_time;
  row.savings_pct = cmp.energy_savings_pct;
  row.time_increase_pct = cmp.time_increase_pct;
  row.dvfs_deadline_met = sim_dvfs.deadline_met;
  row.dvo_deadline_met = sim_dvo.deadline_met;
  row.dvfs_feasible = dvfs.feasible;
  return row;
}

namespace detail {

inline void finalize(SweepReport& report) {
  // Aggregates keyed by (scenario, z) in first-appearance order.
  std::vector<std::pair<std::string, double>> keys;
  std::map<std::pair<std::string, double>, std::vector<const SweepRow*>> groups;
  for (const SweepRow& row : report.rows) {
    auto key = std::make_pair(row.scenario, row.z);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) keys.push_back(key);
    it->second.push_back(&row);
  }
  for (const auto& key : keys) {
    const auto& rows = groups.at(key);
    SweepAggregate agg;
    agg.scenario = key.first;
    agg.z = key.second;
    agg.runs = rows.size();
    double ec_dvfs = 0, ec_dvo = 0, ft_dvfs = 0, ft_dvo = 0, sav = 0, inc = 0;
    for (const SweepRow* r : rows) {
      ec_dvfs += r->ec_dvfs;
      ec_dvo += r->ec_dvo;
      ft_dvfs += r->ft_dvfs;
      ft_dvo += r->ft_dvo;
      sav += r->savings_pct;
      inc += r->time_increase_pct;
    }
    const double n = static_cast<double>(rows.size());
    agg.norm_energy_dvfs = ec_dvfs / ec_dvo;
    agg.norm_time_dvfs = ft_dvfs / ft_dvo;
    agg.mean_savings_pct = sav / n;
    agg.mean_time_increase_pct = inc / n;
    report.aggregates.push_back(agg);
  }

  // A scenario is flagged infeasible when no run of it produced a feasible
  // plan and every run missed the deadline.
  std::map<std::string, bool> any_ok;
  for (const SweepRow& row : report.rows) {
    auto [it, inserted] = any_ok.try_emplace(row.scenario, false);
    if (row.dvfs_feasible || row.dvfs_deadline_met) it->second = true;
  }
  for (const SweepRow& row : report.rows) {
    if (!any_ok.at(row.scenario)) {
      if (std::find(report.infeasible_scenarios.begin(),
                    report.infeasible_scenarios.end(),
                    row.scenario) == report.infeasible_scenarios.end()) {
        report.infeasible_scenarios.push_back(row.scenario);
      }
    }
  }
}

}  // namespace detail

/// DV-DVFS vs DVO over every (scenario, seed) at the config's base z.
inline SweepReport run_comparison(const ExperimentConfig& cfg) {
  SweepReport report;
  for (const DeadlineScenario& scenario : cfg.deadline_scenarios) {
    for (std::uint64_t seed : cfg.seeds) {
      report.rows.push_back(run_single(cfg, scenario, cfg.workload.zipf.z, seed));
    }
  }
  detail::finalize(report);
  return report;
}

/// The comparison repeated for every exponent in z_sweep.
inline SweepReport run_variety_sweep(const ExperimentConfig& cfg) {
  if (cfg.z_sweep.empty()) {
    throw std::invalid_argument("run_variety_sweep: z_sweep is empty");
  }
  SweepReport report;
  for (const DeadlineScenario& scenario : cfg.deadline_scenarios) {
    for (double z : cfg.z_sweep) {
      for (std::uint64_t seed : cfg.seeds) {
        report.rows.push_back(run_single(cfg, scenario, z, seed));
      }
    }
  }
  detail::finalize(report);
  return report;
}

/// The comparison per deadline scenario, checking that for each seed a larger
/// deadline never increases the DV-DVFS energy.
inline SweepReport run_deadline_sweep(const ExperimentConfig& cfg) {
  if (cfg.deadline_scenarios.size() < 2) {
    throw std::invalid_argument(
        "run_deadline_sweep: at least two deadline scenarios required");
  }
  SweepReport report;
  for (const DeadlineScenario& scenario : cfg.deadline_scenarios) {
    for (std::uint64_t seed : cfg.seeds) {
      report.rows.push_back(run_single(cfg, scenario, cfg.workload.zipf.z, seed));
    }
  }
  // Monotonicity: order scenarios by deadline and compare per seed.
  std::vector<DeadlineScenario> ordered = cfg.deadline_scenarios;
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.deadline_s < b.deadline_s; });
  for (std::uint64_t seed : cfg.seeds) {
    auto energy_of = [&](const std::string& label) {
      for (const SweepRow& row : report.rows) {
        if (row.scenario == label && row.seed == seed) return row.ec_dvfs;
      }
      throw std::logic_error("run_deadline_sweep: missing row");
    };
    for (std::size_t i = 1; i < ordered.size(); ++i) {
      const double e_short = energy_of(ordered[i - 1].label);
      const double e_long = energy_of(ordered[i].label);
      if (e_long > e_short * (1.0 + 1e-9)) report.deadline_monotone_ok = false;
    }
  }
  detail::finalize(report);
  return report;
}

}  // namespace dvfsim
