#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "dvfsim/power.hpp"
#include "dvfsim/rng.hpp"
#include "dvfsim/workload.hpp"

namespace dvfsim {

/// Deadline split into equal slots with a reserved error margin at each
/// slot's tail.
struct SlotPlan {
  double deadline = 0.0;      // seconds
  std::size_t n_slots = 0;
  double slot_duration = 0.0; // TS = deadline / n_slots
  double error_margin = 0.0;  // fraction of the slot reserved
  double usable_budget = 0.0; // TS * (1 - error_margin)
};

inline SlotPlan plan_slots(double deadline, std::size_t n_slots,
                           double error_margin) {
  if (deadline <= 0.0) throw std::invalid_argument("plan_slots: deadline must be > 0");
  if (n_slots == 0) throw std::invalid_argument("plan_slots: n_slots must be >= 1");
  if (error_margin < 0.0 || error_margin >= 1.0) {
    throw std::invalid_argument("plan_slots: error_margin must be in [0, 1)");
  }
  SlotPlan plan;
  plan.deadline = deadline;
  plan.n_slots = n_slots;
  plan.slot_duration = deadline / static_cast<double>(n_slots);
  plan.error_margin = error_margin;
  plan.usable_budget = plan.slot_duration * (1.0 - error_margin);
  return plan;
}

struct BlockSample {
  std::size_t block_id = 0;
  std::uint64_t sampled_record_count = 0;
  double sampled_cost_mean = 0.0;    // cycles per record
  double sampled_cost_stddev = 0.0;  // cycles per record
  double sample_fraction = 0.0;
};

struct BlockEstimate {
  std::size_t block_id = 0;
  double cycles_hat = 0.0;
  double ci95_half_width = 0.0;
  bool is_exact = false;
};

struct FrequencyAssignment {
  std::size_t block_id = 0;
  FrequencyLevel frequency;
  double predicted_pt = 0.0;      // seconds
  double predicted_energy = 0.0;  // joules
  bool at_risk = false;           // nothing fit the budget, f_max assigned
};

struct Schedule {
  SlotPlan plan;
  std::vector<FrequencyAssignment> assignments;  // slot order
  double total_predicted_pt = 0.0;
  double total_predicted_energy = 0.0;
  bool feasible = false;
};

/// Uniform sample without replacement of ceil(fraction * record_count)
/// records; reports per-record cost mean and sample standard deviation.
inline BlockSample sample_block(const DataBlock& block, double fraction,
                                std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("sample_block: fraction must be in (0, 1]");
  }
  if (block.record_count == 0) {
    throw std::invalid_argument("sample_block: block has no records");
  }
  const std::uint64_t total = block.record_count;
  std::uint64_t n = static_cast<std::uint64_t>(
      std::ceil(fraction * static_cast<double>(total)));
  if (n == 0) n = 1;
  if (n > total) n = total;

  double sum = 0.0;
  double sum_sq = 0.0;
  auto accumulate = [&](std::uint64_t index) {
    const double c = record_cost(block, index);
    sum += c;
    sum_sq += c * c;
  };

  if (n == total) {
    for (std::uint64_t i = 0; i < total; ++i) accumulate(i);
  } else {
    // Floyd's algorithm: n distinct indices in O(n) draws.
    SplitMix64 g(seed);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(n) * 2);
    for (std::uint64_t j = total - n; j < total; ++j) {
      const std::uint64_t t = g.bounded(j + 1);
      const std::uint64_t pick = chosen.insert(t).second ? t : j;
      if (pick != t) chosen.insert(pick);
      accumulate(pick);
    }
  }

  BlockSample s;
  s.block_id = block.id;
  s.sampled_record_count = n;
  s.sample_fraction = fraction;
  const double nd = static_cast<double>(n);
  s.sampled_cost_mean = sum / nd;
  if (n > 1) {
    const double var =
        std::max(0.0, (sum_sq - nd * s.sampled_cost_mean * s.sampled_cost_mean) /
                          (nd - 1.0));
    s.sampled_cost_stddev = std::sqrt(var);
  }
  return s;
}

/// Point estimate and 95% CI for the block total, with finite-population
/// correction sqrt((N - n) / (N - 1)).
inline BlockEstimate estimate_block(const BlockSample& sample,
                                    std::uint64_t record_count) {
  if (record_count == 0) {
    throw std::invalid_argument("estimate_block: record_count must be >= 1");
  }
  if (sample.sampled_record_count == 0) {
    throw std::invalid_argument("estimate_block: empty sample");
  }
  BlockEstimate e;
  e.block_id = sample.block_id;
  const double nd = static_cast<double>(sample.sampled_record_count);
  const double Nd = static_cast<double>(record_count);
  e.cycles_hat = sample.sampled_cost_mean * Nd;
  e.is_exact = sample.sample_fraction >= 1.0 ||
               sample.sampled_record_count == record_count;
  if (!e.is_exact && record_count > 1) {
    const double fpc = std::sqrt((Nd - nd) / (Nd - 1.0));
    e.ci95_half_width =
        1.96 * (sample.sampled_cost_stddev / std::sqrt(nd)) * Nd * fpc;
  }
  return e;
}

/// Time to burn `cycles` at frequency f.
inline double predicted_pt(double cycles, FrequencyLevel f) {
  if (cycles < 0.0) throw std::invalid_argument("predicted_pt: cycles must be >= 0");
  if (f.ghz <= 0.0) throw std::invalid_argument("predicted_pt: frequency must be > 0");
  return cycles / f.cycles_per_second();
}

/// Chooses the minimum-energy frequency whose conservative work bound
/// (estimate plus CI half-width) fits the slot's usable budget. Ties break
/// toward the lower frequency. If nothing fits, f_max is assigned with
/// at_risk set.
inline FrequencyAssignment select_frequency(const BlockEstimate& estimate,
                                            const SlotPlan& plan,
                                            const ServerModel& server,
                                            EnergyMode mode) {
  server.validate();
  const double bound = estimate.cycles_hat + estimate.ci95_half_width;

  FrequencyAssignment a;
  a.block_id = estimate.block_id;
  bool found = false;
  double best_energy = 0.0;
  for (const FrequencyLevel f : server.frequencies) {
    const double pt = predicted_pt(bound, f);
    if (pt > plan.usable_budget) continue;
    const double e = slot_energy(server, f, pt, plan.slot_duration, mode);
    if (!found || e < best_energy) {
      found = true;
      best_energy = e;
      a.frequency = f;
      a.predicted_pt = pt;
      a.predicted_energy = e;
    }
  }
  if (!found) {
    a.frequency = server.f_max();
    a.predicted_pt = predicted_pt(bound, a.frequency);
    a.predicted_energy =
        slot_energy(server, a.frequency, a.predicted_pt, plan.slot_duration, mode);
    a.at_risk = true;
  }
  return a;
}

namespace detail {

inline Schedule assemble(const SlotPlan& plan,
                         std::vector<FrequencyAssignment> assignments) {
  Schedule s;
  s.plan = plan;
  s.feasible = true;
  for (const auto& a : assignments) {
    s.total_predicted_pt += a.predicted_pt;
    s.total_predicted_energy += a.predicted_energy;
    if (a.at_risk) s.feasible = false;
  }
  s.assignments = std::move(assignments);
  return s;
}

}  // namespace detail

/// The variety-aware plan: sample every block once, estimate its work, and
/// pick a per-slot frequency. Per-block sampling seeds derive from the master
/// seed by block id, so the result is independent of evaluation order.
inline Schedule schedule_dv_dvfs(const std::vector<DataBlock>& blocks,
                                 const SlotPlan& plan, const ServerModel& server,
                                 double sampling_fraction, EnergyMode mode,
                                 std::uint64_t seed) {
  if (blocks.size() != plan.n_slots) {
    throw std::invalid_argument("schedule_dv_dvfs: block count != n_slots");
  }
  std::vector<FrequencyAssignment> assignments;
  assignments.reserve(blocks.size());
  for (const DataBlock& block : blocks) {
    BlockEstimate est;
    if (sampling_fraction >= 1.0) {
      // Exhaustive sample: the estimate is the ground truth, bit-exact.
      est.block_id = block.id;
      est.cycles_hat = true_cycles(block);
      est.is_exact = true;
    } else {
      const BlockSample sample =
          sample_block(block, sampling_fraction, mix_seed(seed, block.id));
      est = estimate_block(sample, block.record_count);
    }
    assignments.push_back(select_frequency(est, plan, server, mode));
  }
  return detail::assemble(plan, std::move(assignments));
}

/// The Data Variety Oblivious baseline: every block at f_max, no sampling.
/// Predicted times come from true cycles so the comparison is fair.
inline Schedule schedule_dvo(const std::vector<DataBlock>& blocks,
                             const SlotPlan& plan, const ServerModel& server,
                             EnergyMode mode) {
  if (blocks.size() != plan.n_slots) {
    throw std::invalid_argument("schedule_dvo: block count != n_slots");
  }
  server.validate();
  const FrequencyLevel f = server.f_max();
  std::vector<FrequencyAssignment> assignments;
  assignments.reserve(blocks.size());
  for (const DataBlock& block : blocks) {
    FrequencyAssignment a;
    a.block_id = block.id;
    a.frequency = f;
    a.predicted_pt = predicted_pt(true_cycles(block), f);
    a.predicted_energy =
        slot_energy(server, f, a.predicted_pt, plan.slot_duration, mode);
    a.at_risk = a.predicted_pt > plan.usable_budget;
    assignments.push_back(a);
  }
  return detail::assemble(plan, std::move(assignments));
}

}  // namespace dvfsim
