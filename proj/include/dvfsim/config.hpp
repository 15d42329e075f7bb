#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dvfsim/power.hpp"
#include "dvfsim/workload.hpp"

namespace dvfsim {

class config_error : public std::runtime_error {
 public:
  enum class Kind { MissingFile, ParseError, ValidationError };

  config_error(Kind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct DeadlineScenario {
  std::string label;
  double deadline_s = 0.0;
};

struct ExperimentConfig {
  WorkloadSpec workload;
  ServerModel server;
  std::vector<DeadlineScenario> deadline_scenarios;
  double error_margin = 0.05;
  double sampling_fraction = 0.01;
  EnergyMode energy_mode = EnergyMode::SlotAverage;
  std::vector<double> z_sweep;
  std::vector<std::uint64_t> seeds;
  std::string output_dir = "out";
};

/// Tight/firm deadline pairs for the benchmark presets.
inline const std::map<std::string, std::pair<double, double>>&
deadline_presets() {
  static const std::map<std::string, std::pair<double, double>> presets = {
      {"wordcount", {1350.0, 1500.0}},
      {"grep", {670.0, 730.0}},
      {"inverted-index", {27000.0, 30000.0}},
      {"tpc", {1250.0, 1400.0}},
      {"amazon", {1150.0, 1350.0}},
  };
  return presets;
}

/// Measured full-load CPU utilization per application.
inline double app_u_full(const std::string& app) {
  static const std::map<std::string, double> table = {
      {"wordcount", 0.68},
      {"grep", 0.45},
      {"inverted-index", 0.82},
  };
  auto it = table.find(app);
  if (it == table.end()) {
    throw config_error(config_error::Kind::ValidationError,
                       "server.u_full_app: unknown application '" + app + "'");
  }
  return it->second;
}

/// The stock two-level server: 1.6/2.8 GHz, 100 W idle, 200 W full at
/// 2.8 GHz, cubic law.
inline ServerModel default_server() {
  ServerModel s;
  s.frequencies = {{1.6}, {2.8}};
  s.curve.p_idle = 100.0;
  s.curve.anchor_freq = 2.8;
  s.curve.p_full_at_anchor = 200.0;
  s.curve.exponent_alpha = 3.0;
  s.u_full = 0.68;
  return s;
}

inline EnergyMode parse_energy_mode(const std::string& name) {
  if (name == "slot-average") return EnergyMode::SlotAverage;
  if (name == "busy-literal") return EnergyMode::BusyTimeLiteral;
  throw config_error(config_error::Kind::ValidationError,
                     "energy_mode: expected 'slot-average' or 'busy-literal', got '" +
                         name + "'");
}

inline std::string energy_mode_name(EnergyMode mode) {
  return mode == EnergyMode::SlotAverage ? "slot-average" : "busy-literal";
}

/// Two-column CSV (GHz, watts) loader for measured power tables.
inline std::vector<std::pair<double, double>> load_power_table_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error(config_error::Kind::MissingFile,
                       "power table not found: " + path);
  }
  std::vector<std::pair<double, double>> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b)) {
      throw config_error(config_error::Kind::ParseError,
                         path + ":" + std::to_string(line_no) +
                             ": expected 'ghz,watts'");
    }
    try {
      table.emplace_back(std::stod(a), std::stod(b));
    } catch (const std::exception&) {
      throw config_error(config_error::Kind::ParseError,
                         path + ":" + std::to_string(line_no) +
                             ": expected 'ghz,watts'");
    }
  }
  return table;
}

namespace detail {

template <typename T>
T get_or(const nlohmann::json& j, const std::string& key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

inline void validation_fail(std::vector<std::string>& errors,
                            const std::string& path, const std::string& what) {
  errors.push_back(path + ": " + what);
}

}  // namespace detail

/// Parses an already-loaded JSON document into a validated config. Every
/// invariant violation is reported with its field path.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  std::vector<std::string> errors;

  try {
    if (j.contains("workload")) {
      const auto& w = j.at("workload");
      cfg.workload.n_blocks = detail::get_or<std::size_t>(w, "n_blocks", 1);
      cfg.workload.records_per_block =
          detail::get_or<std::size_t>(w, "records_per_block", 1);
      cfg.workload.total_hit_records =
          detail::get_or<std::uint64_t>(w, "total_hit_records", 0);
      cfg.workload.cycles_per_hit = detail::get_or<double>(w, "cycles_per_hit", 0.0);
      cfg.workload.cycles_per_miss =
          detail::get_or<double>(w, "cycles_per_miss", 0.0);
      cfg.workload.zipf.z = detail::get_or<double>(w, "zipf_z", 0.0);
      cfg.workload.zipf.n = cfg.workload.n_blocks;
      cfg.workload.rng_seed = detail::get_or<std::uint64_t>(w, "rng_seed", 0);
      cfg.workload.shuffle_blocks =
          detail::get_or<bool>(w, "shuffle_blocks", false);
      cfg.workload.jitter_sigma = detail::get_or<double>(w, "jitter_sigma", 0.0);
    }

    cfg.server = default_server();
    if (j.contains("server")) {
      const auto& s = j.at("server");
      if (s.contains("frequencies_ghz")) {
        cfg.server.frequencies.clear();
        for (double f : s.at("frequencies_ghz").get<std::vector<double>>()) {
          cfg.server.frequencies.push_back({f});
        }
      }
      cfg.server.curve.p_idle =
          detail::get_or<double>(s, "p_idle_w", cfg.server.curve.p_idle);
      cfg.server.curve.p_full_at_anchor =
          detail::get_or<double>(s, "p_full_w", cfg.server.curve.p_full_at_anchor);
      cfg.server.curve.anchor_freq =
          detail::get_or<double>(s, "anchor_ghz", cfg.server.curve.anchor_freq);
      cfg.server.curve.exponent_alpha =
          detail::get_or<double>(s, "alpha", cfg.server.curve.exponent_alpha);
      if (s.contains("u_full_app") && !s.at("u_full_app").is_null()) {
        cfg.server.u_full = app_u_full(s.at("u_full_app").get<std::string>());
      }
      cfg.server.u_full = detail::get_or<double>(s, "u_full", cfg.server.u_full);
      if (s.contains("power_table_csv") && !s.at("power_table_csv").is_null()) {
        cfg.server.curve.table =
            load_power_table_csv(s.at("power_table_csv").get<std::string>());
      }
    }

    if (j.contains("deadline_preset")) {
      const std::string name = j.at("deadline_preset").get<std::string>();
      auto it = deadline_presets().find(name);
      if (it == deadline_presets().end()) {
        detail::validation_fail(errors, "deadline_preset",
                                "unknown preset '" + name + "'");
      } else {
        cfg.deadline_scenarios.push_back({"tight", it->second.first});
        cfg.deadline_scenarios.push_back({"firm", it->second.second});
      }
    }
    if (j.contains("deadline_scenarios")) {
      for (const auto& d : j.at("deadline_scenarios")) {
        cfg.deadline_scenarios.push_back(
            {d.at("label").get<std::string>(), d.at("deadline_s").get<double>()});
      }
    }

    cfg.error_margin = detail::get_or<double>(j, "error_margin", 0.05);
    cfg.sampling_fraction = detail::get_or<double>(j, "sampling_fraction", 0.01);
    if (j.contains("energy_mode")) {
      cfg.energy_mode = parse_energy_mode(j.at("energy_mode").get<std::string>());
    }
    cfg.z_sweep = detail::get_or<std::vector<double>>(j, "z_sweep", {});
    cfg.seeds = detail::get_or<std::vector<std::uint64_t>>(j, "seeds", {1});
    cfg.output_dir = detail::get_or<std::string>(j, "output_dir", "out");
  } catch (const config_error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(config_error::Kind::ParseError,
                       std::string("config parse error: ") + e.what());
  }

  // Field-level validation, collected so one pass reports everything.
  try {
    cfg.workload.validate();
  } catch (const std::exception& e) {
    detail::validation_fail(errors, "workload", e.what());
  }
  try {
    cfg.server.validate();
  } catch (const std::exception& e) {
    detail::validation_fail(errors, "server", e.what());
  }
  if (cfg.deadline_scenarios.empty()) {
    detail::validation_fail(errors, "deadline_scenarios",
                            "at least one scenario required");
  }
  for (const auto& d : cfg.deadline_scenarios) {
    if (d.deadline_s <= 0.0) {
      detail::validation_fail(errors, "deadline_scenarios." + d.label,
                              "deadline must be > 0");
    }
  }
  if (cfg.error_margin < 0.0 || cfg.error_margin >= 1.0) {
    detail::validation_fail(errors, "error_margin", "must be in [0, 1)");
  }
  if (!(cfg.sampling_fraction > 0.0 && cfg.sampling_fraction <= 1.0)) {
    detail::validation_fail(errors, "sampling_fraction", "must be in (0, 1]");
  }
  if (cfg.seeds.empty()) {
    detail::validation_fail(errors, "seeds", "at least one seed required");
  }

  if (!errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw config_error(config_error::Kind::ValidationError, msg);
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error(config_error::Kind::MissingFile,
                       "config file not found: " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(config_error::Kind::ParseError,
                       path + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace dvfsim
