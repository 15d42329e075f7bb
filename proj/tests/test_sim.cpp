#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dvfsim/sim.hpp"

using namespace dvfsim;

static ServerModel two_level_server(double u_full = 1.0) {
  ServerModel s;
  s.frequencies = {{1.6}, {2.8}};
  s.curve = PowerCurve{100.0, 2.8, 200.0, 3.0, {}};
  s.u_full = u_full;
  return s;
}

static std::vector<DataBlock> blocks_with_cycles(const std::vector<double>& cycles) {
  // Single-class blocks whose miss cost encodes the wanted total work.
  std::vector<DataBlock> blocks;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    DataBlock b;
    b.id = i + 1;
    b.record_count = 1;
    b.hit_count = 0;
    b.cycles_per_hit = cycles[i];
    b.cycles_per_miss = cycles[i];
    blocks.push_back(b);
  }
  return blocks;
}

TEST_CASE("execute timeline") {
  const ServerModel server = two_level_server();

  SECTION("blocks exactly filling their budgets finish at D minus the margin") {
    // Three slots of 2 s, margin 10% -> budget 1.8 s at 2.8 GHz.
    const SlotPlan plan = plan_slots(6.0, 3, 0.1);
    const auto blocks =
        blocks_with_cycles({1.8 * 2.8e9, 1.8 * 2.8e9, 1.8 * 2.8e9});
    const Schedule sched =
        schedule_dv_dvfs(blocks, plan, server, 1.0, EnergyMode::SlotAverage, 1);
    const SimulationResult r =
        execute(sched, blocks, server, EnergyMode::SlotAverage);
    CHECK(r.finish_time == Catch::Approx(6.0 - 2.0 * 0.1));
    CHECK(r.deadline_met);
    // Each block sits in its own slot.
    for (std::size_t i = 0; i < r.traces.size(); ++i) {
      CHECK(r.traces[i].start_time == Catch::Approx(2.0 * i));
      CHECK(r.traces[i].slot_overrun == Catch::Approx(0.0));
    }
  }

  SECTION("an overrun within the margin leaves successors unaffected") {
    const SlotPlan plan = plan_slots(6.0, 3, 0.1);
    // Block 1 runs 1.95 s (overrun 0.0, fits slot of 2 s but exceeds the
    // budget's 1.8 s), blocks 2-3 run 1 s.
    const auto blocks = blocks_with_cycles({1.95 * 2.8e9, 2.8e9, 2.8e9});
    Schedule sched;
    sched.plan = plan;
    for (const auto& b : blocks) {
      FrequencyAssignment a;
      a.block_id = b.id;
      a.frequency = {2.8};
      sched.assignments.push_back(a);
    }
    const SimulationResult r =
        execute(sched, blocks, server, EnergyMode::SlotAverage);
    CHECK(r.traces[1].start_time == Catch::Approx(2.0));
    CHECK(r.traces[2].start_time == Catch::Approx(4.0));
    CHECK(r.deadline_met);
  }

  SECTION("overruns cascade into successors") {
    const SlotPlan plan = plan_slots(6.0, 3, 0.0);
    const auto blocks = blocks_with_cycles({3.0 * 2.8e9, 2.8e9, 2.8e9});
    Schedule sched;
    sched.plan = plan;
    for (const auto& b : blocks) {
      FrequencyAssignment a;
      a.block_id = b.id;
      a.frequency = {2.8};
      sched.assignments.push_back(a);
    }
    const SimulationResult r =
        execute(sched, blocks, server, EnergyMode::SlotAverage);
    CHECK(r.traces[0].slot_overrun == Catch::Approx(1.0));
    CHECK(r.traces[1].start_time == Catch::Approx(3.0));
    CHECK(r.traces[2].start_time == Catch::Approx(4.0));
    CHECK(r.finish_time == Catch::Approx(5.0));
    CHECK(r.deadline_met);
  }

  SECTION("id mismatch rejected") {
    const SlotPlan plan = plan_slots(6.0, 2, 0.0);
    auto blocks = blocks_with_cycles({2.8e9, 2.8e9});
    Schedule sched;
    sched.plan = plan;
    FrequencyAssignment a;
    a.block_id = 99;
    a.frequency = {2.8};
    sched.assignments.push_back(a);
    sched.assignments.push_back(a);
    CHECK_THROWS_AS(execute(sched, blocks, server, EnergyMode::SlotAverage),
                    std::invalid_argument);
  }
}

TEST_CASE("energy conservation and mode ordering") {
  const ServerModel server = two_level_server(0.68);
  SplitMix64 g(41);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + g.bounded(6);
    std::vector<double> cycles;
    for (std::size_t i = 0; i < n; ++i) {
      cycles.push_back(1e9 + 4e9 * g.next_double());
    }
    const auto blocks = blocks_with_cycles(cycles);
    double total_pt = 0;
    for (double c : cycles) total_pt += c / 2.8e9;
    const SlotPlan plan =
        plan_slots(total_pt * (1.2 + g.next_double()), n, 0.05);
    const Schedule sched =
        schedule_dv_dvfs(blocks, plan, server, 1.0, EnergyMode::SlotAverage, 1);

    const SimulationResult avg =
        execute(sched, blocks, server, EnergyMode::SlotAverage);
    const SimulationResult lit =
        execute(sched, blocks, server, EnergyMode::BusyTimeLiteral);

    double sum = 0;
    for (const auto& t : avg.traces) sum += t.actual_energy;
    REQUIRE(sum == avg.total_energy);
    REQUIRE(lit.total_energy <= avg.total_energy + 1e-9);
  }
}

TEST_CASE("feasible exact-estimate schedules always meet the deadline") {
  const ServerModel server = two_level_server(0.68);
  SplitMix64 g(43);
  int feasible_seen = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    WorkloadSpec spec;
    spec.n_blocks = 1 + g.bounded(8);
    spec.records_per_block = 100;
    spec.total_hit_records = g.bounded(spec.records_per_block);
    spec.cycles_per_hit = 26e6;
    spec.cycles_per_miss = 1e6;
    spec.zipf = {3.0 * g.next_double(), spec.n_blocks};
    spec.rng_seed = g.next();
    spec.shuffle_blocks = true;
    const auto blocks = generate_blocks(spec);
    double total_pt = 0;
    for (const auto& b : blocks) total_pt += true_cycles(b) / 2.8e9;
    const SlotPlan plan = plan_slots(total_pt * (1.0 + 2.0 * g.next_double()),
                                     spec.n_blocks, 0.05);
    const Schedule sched =
        schedule_dv_dvfs(blocks, plan, server, 1.0, EnergyMode::SlotAverage, g.next());
    if (!sched.feasible) continue;
    ++feasible_seen;
    const SimulationResult r =
        execute(sched, blocks, server, EnergyMode::SlotAverage);
    REQUIRE(r.deadline_met);
  }
  CHECK(feasible_seen > 300);
}

TEST_CASE("no variety and tight budgets give bit-equal traces") {
  const ServerModel server = two_level_server(0.68);
  WorkloadSpec spec;
  spec.n_blocks = 5;
  spec.records_per_block = 1000;
  spec.total_hit_records = 1000;
  spec.cycles_per_hit = 5e6;
  spec.cycles_per_miss = 1e6;
  spec.zipf = {0.0, 5};
  spec.rng_seed = 3;
  const auto blocks = generate_blocks(spec);
  double total_pt = 0;
  for (const auto& b : blocks) total_pt += true_cycles(b) / 2.8e9;
  const SlotPlan plan = plan_slots(total_pt * 1.02, 5, 0.0);

  const Schedule dvfs =
      schedule_dv_dvfs(blocks, plan, server, 1.0, EnergyMode::SlotAverage, 9);
  const Schedule dvo = schedule_dvo(blocks, plan, server, EnergyMode::SlotAverage);
  const SimulationResult a = execute(dvfs, blocks, server, EnergyMode::SlotAverage);
  const SimulationResult b = execute(dvo, blocks, server, EnergyMode::SlotAverage);
  REQUIRE(a.traces.size() == b.traces.size());
  for (std::size_t i = 0; i < a.traces.size(); ++i) {
    CHECK(a.traces[i].frequency.ghz == b.traces[i].frequency.ghz);
    CHECK(a.traces[i].start_time == b.traces[i].start_time);
    CHECK(a.traces[i].end_time == b.traces[i].end_time);
    CHECK(a.traces[i].actual_energy == b.traces[i].actual_energy);
  }
}

TEST_CASE("feasible DV-DVFS never uses more energy than DVO in slot-average mode") {
  SplitMix64 g(47);
  for (int trial = 0; trial < 200; ++trial) {
    ServerModel server;
    server.curve.p_idle = 120.0 * g.next_double();
    server.curve.p_full_at_anchor = server.curve.p_idle + 20.0 + 250.0 * g.next_double();
    server.curve.anchor_freq = 2.8;
    server.curve.exponent_alpha = 1.0 + 3.0 * g.next_double() + 1e-9;
    server.u_full = 0.05 + 0.95 * g.next_double();
    server.frequencies = {{1.2}, {1.8}, {2.8}};

    WorkloadSpec spec;
    spec.n_blocks = 2 + g.bounded(5);
    spec.records_per_block = 100;
    spec.total_hit_records = g.bounded(spec.records_per_block);
    spec.cycles_per_hit = 20e6;
    spec.cycles_per_miss = 1e6;
    spec.zipf = {2.5 * g.next_double(), spec.n_blocks};
    spec.rng_seed = g.next();
    const auto blocks = generate_blocks(spec);
    double total_pt = 0;
    for (const auto& b : blocks) total_pt += true_cycles(b) / 2.8e9;
    const SlotPlan plan = plan_slots(total_pt * (1.1 + 2.0 * g.next_double()),
                                     spec.n_blocks, 0.05);

    const Schedule dvfs =
        schedule_dv_dvfs(blocks, plan, server, 1.0, EnergyMode::SlotAverage, 1);
    if (!dvfs.feasible) continue;
    const Schedule dvo =
        schedule_dvo(blocks, plan, server, EnergyMode::SlotAverage);
    const SimulationResult sim_dvfs =
        execute(dvfs, blocks, server, EnergyMode::SlotAverage);
    const SimulationResult sim_dvo =
        execute(dvo, blocks, server, EnergyMode::SlotAverage);
    REQUIRE(sim_dvfs.total_energy <= sim_dvo.total_energy * (1.0 + 1e-12));
  }
}

TEST_CASE("compare") {
  SimulationResult dvfs, dvo;
  dvfs.total_energy = 870.0;
  dvfs.finish_time = 107.0;
  dvfs.deadline_met = true;
  dvo.total_energy = 1000.0;
  dvo.finish_time = 100.0;
  dvo.deadline_met = true;

  SECTION("percent definitions") {
    const ComparisonReport r = compare(dvfs, dvo);
    CHECK(r.energy_savings_pct == Catch::Approx(13.0));
    CHECK(r.time_increase_pct == Catch::Approx(7.0));
    CHECK(r.both_met_deadline);
  }
  SECTION("identical results") {
    const ComparisonReport r = compare(dvo, dvo);
    CHECK(r.energy_savings_pct == Catch::Approx(0.0));
    CHECK(r.time_increase_pct == Catch::Approx(0.0));
  }
  SECTION("degenerate baseline") {
    SimulationResult zero;
    CHECK_THROWS_AS(compare(dvfs, zero), std::invalid_argument);
  }
}
