#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "dvfsim/planner.hpp"
#include "dvfsim/power.hpp"
#include "dvfsim/workload.hpp"

namespace dvfsim {

struct BlockTrace {
  std::size_t block_id = 0;
  FrequencyLevel frequency;
  double start_time = 0.0;
  double actual_pt = 0.0;
  double end_time = 0.0;
  double slot_overrun = 0.0;
  double actual_energy = 0.0;
};

struct SimulationResult {
  std::vector<BlockTrace> traces;
  double finish_time = 0.0;   // busy finish time, max end_time
  double total_energy = 0.0;
  bool deadline_met = false;
  EnergyMode mode = EnergyMode::SlotAverage;
};

struct ComparisonReport {
  double energy_savings_pct = 0.0;
  double time_increase_pct = 0.0;
  bool both_met_deadline = false;
};

/// Runs a schedule against the ground-truth block work on a single server.
/// Block i starts at max(end of block i-1, start of slot i); overruns cascade
/// by delaying successors.
inline SimulationResult execute(const Schedule& schedule,
                                const std::vector<DataBlock>& blocks,
                                const ServerModel& server, EnergyMode mode) {
  if (blocks.size() != schedule.assignments.size()) {
    throw std::invalid_argument("execute: block count != assignment count");
  }
  const SlotPlan& plan = schedule.plan;
  SimulationResult result;
  result.mode = mode;
  result.traces.reserve(blocks.size());

  double clock = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const DataBlock& block = blocks[i];
    const FrequencyAssignment& a = schedule.assignments[i];
    if (a.block_id != block.id) {
      throw std::invalid_argument("execute: assignment/block id mismatch at slot " +
                                  std::to_string(i));
    }
    BlockTrace t;
    t.block_id = block.id;
    t.frequency = a.frequency;
    const double slot_start = static_cast<double>(i) * plan.slot_duration;
    const double slot_end = slot_start + plan.slot_duration;
    t.start_time = std::max(clock, slot_start);
    t.actual_pt = predicted_pt(true_cycles(block), a.frequency);
    t.end_time = t.start_time + t.actual_pt;
    t.slot_overrun = std::max(0.0, t.end_time - slot_end);
    t.actual_energy =
        slot_energy(server, a.frequency, t.actual_pt, plan.slot_duration, mode);
    result.total_energy += t.actual_energy;
    result.finish_time = std::max(result.finish_time, t.end_time);
    clock = t.end_time;
    result.traces.push_back(t);
  }
  result.deadline_met = result.finish_time <= plan.deadline;
  return result;
}

inline ComparisonReport compare(const SimulationResult& dvfs,
                                const SimulationResult& dvo) {
  if (dvo.total_energy <= 0.0 || dvo.finish_time <= 0.0) {
    throw std::invalid_argument("compare: degenerate baseline (zero energy or time)");
  }
  ComparisonReport r;
  r.energy_savings_pct =
      100.0 * (dvo.total_energy - dvfs.total_energy) / dvo.total_energy;
  r.time_increase_pct =
      100.0 * (dvfs.finish_time - dvo.finish_time) / dvo.finish_time;
  r.both_met_deadline = dvfs.deadline_met && dvo.deadline_met;
  return r;
}

}  // namespace dvfsim
