#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dvfsim/experiment.hpp"

namespace dvfsim {

enum class ReportFormat { Csv, Json };

inline ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw std::invalid_argument("report format: expected 'csv' or 'json', got '" +
                              name + "'");
}

namespace detail {

/// Stable float formatting: 6 significant digits, locale independent.
inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << contents;
}

}  // namespace detail

inline constexpr const char* kRowsCsvHeader =
    "scenario,z,seed,ec_dvfs_j,ec_dvo_j,ft_dvfs_s,ft_dvo_s,savings_pct,"
    "time_increase_pct,dvfs_deadline_met,dvo_deadline_met,dvfs_feasible";

inline constexpr const char* kAggregatesCsvHeader =
    "scenario,z,runs,norm_energy_dvfs,norm_energy_dvo,norm_time_dvfs,"
    "norm_time_dvo,mean_savings_pct,mean_time_increase_pct";

inline std::string rows_csv(const SweepReport& report) {
  std::string out = std::string(kRowsCsvHeader) + "\n";
  for (const SweepRow& r : report.rows) {
    out += r.scenario + "," + detail::fmt(r.z) + "," + std::to_string(r.seed) +
           "," + detail::fmt(r.ec_dvfs) + "," + detail::fmt(r.ec_dvo) + "," +
           detail::fmt(r.ft_dvfs) + "," + detail::fmt(r.ft_dvo) + "," +
           detail::fmt(r.savings_pct) + "," + detail::fmt(r.time_increase_pct) +
           "," + (r.dvfs_deadline_met ? "1" : "0") + "," +
           (r.dvo_deadline_met ? "1" : "0") + "," +
           (r.dvfs_feasible ? "1" : "0") + "\n";
  }
  return out;
}

/// Plot-ready normalized bars, one row per (scenario, z).
inline std::string aggregates_csv(const SweepReport& report) {
  std::string out = std::string(kAggregatesCsvHeader) + "\n";
  for (const SweepAggregate& a : report.aggregates) {
    out += a.scenario + "," + detail::fmt(a.z) + "," + std::to_string(a.runs) +
           "," + detail::fmt(a.norm_energy_dvfs) + "," +
           detail::fmt(a.norm_energy_dvo) + "," + detail::fmt(a.norm_time_dvfs) +
           "," + detail::fmt(a.norm_time_dvo) + "," +
           detail::fmt(a.mean_savings_pct) + "," +
           detail::fmt(a.mean_time_increase_pct) + "\n";
  }
  return out;
}

inline nlohmann::json report_json(const SweepReport& report) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["rows"] = nlohmann::json::array();
  for (const SweepRow& r : report.rows) {
    j["rows"].push_back({{"scenario", r.scenario},
                         {"z", r.z},
                         {"seed", r.seed},
                         {"ec_dvfs_j", r.ec_dvfs},
                         {"ec_dvo_j", r.ec_dvo},
                         {"ft_dvfs_s", r.ft_dvfs},
                         {"ft_dvo_s", r.ft_dvo},
                         {"savings_pct", r.savings_pct},
                         {"time_increase_pct", r.time_increase_pct},
                         {"dvfs_deadline_met", r.dvfs_deadline_met},
                         {"dvo_deadline_met", r.dvo_deadline_met},
                         {"dvfs_feasible", r.dvfs_feasible}});
  }
  j["aggregates"] = nlohmann::json::array();
  for (const SweepAggregate& a : report.aggregates) {
    j["aggregates"].push_back({{"scenario", a.scenario},
                               {"z", a.z},
                               {"runs", a.runs},
                               {"norm_energy_dvfs", a.norm_energy_dvfs},
                               {"norm_energy_dvo", a.norm_energy_dvo},
                               {"norm_time_dvfs", a.norm_time_dvfs},
                               {"norm_time_dvo", a.norm_time_dvo},
                               {"mean_savings_pct", a.mean_savings_pct},
                               {"mean_time_increase_pct",
                                a.mean_time_increase_pct}});
  }
  j["infeasible_scenarios"] = report.infeasible_scenarios;
  j["deadline_monotone_ok"] = report.deadline_monotone_ok;
  return j;
}

/// Reads a previously emitted JSON report back; numeric fields round-trip
/// exactly.
inline SweepReport load_report_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("report not found: " + path);
  nlohmann::json j;
  in >> j;
  if (j.at("schema_version").get<int>() != 1) {
    throw std::runtime_error("unsupported report schema_version");
  }
  SweepReport report;
  for (const auto& rj : j.at("rows")) {
    SweepRow r;
    r.scenario = rj.at("scenario").get<std::string>();
    r.z = rj.at("z").get<double>();
    r.seed = rj.at("seed").get<std::uint64_t>();
    r.ec_dvfs = rj.at("ec_dvfs_j").get<double>();
    r.ec_dvo = rj.at("ec_dvo_j").get<double>();
    r.ft_dvfs = rj.at("ft_dvfs_s").get<double>();
    r.ft_dvo = rj.at("ft_dvo_s").get<double>();
    r.savings_pct = rj.at("savings_pct").get<double>();
    r.time_increase_pct = rj.at("time_increase_pct").get<double>();
    r.dvfs_deadline_met = rj.at("dvfs_deadline_met").get<bool>();
    r.dvo_deadline_met = rj.at("dvo_deadline_met").get<bool>();
    r.dvfs_feasible = rj.at("dvfs_feasible").get<bool>();
    report.rows.push_back(r);
  }
  for (const auto& aj : j.at("aggregates")) {
    SweepAggregate a;
    a.scenario = aj.at("scenario").get<std::string>();
    a.z = aj.at("z").get<double>();
    a.runs = aj.at("runs").get<std::size_t>();
    a.norm_energy_dvfs = aj.at("norm_energy_dvfs").get<double>();
    a.norm_energy_dvo = aj.at("norm_energy_dvo").get<double>();
    a.norm_time_dvfs = aj.at("norm_time_dvfs").get<double>();
    a.norm_time_dvo = aj.at("norm_time_dvo").get<double>();
    a.mean_savings_pct = aj.at("mean_savings_pct").get<double>();
    a.mean_time_increase_pct = aj.at("mean_time_increase_pct").get<double>();
    report.aggregates.push_back(a);
  }
  report.infeasible_scenarios =
      j.at("infeasible_scenarios").get<std::vector<std::string>>();
  report.deadline_monotone_ok = j.at("deadline_monotone_ok").get<bool>();
  return report;
}

/// Writes the report into output_dir. CSV format emits rows.csv, JSON emits
/// report.json; the plot-data aggregates.csv is always written. Returns the
/// paths written.
inline std::vector<std::string> emit_report(const SweepReport& report,
                                            ReportFormat format,
                                            const std::string& output_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory: " + output_dir);
  }
  std::vector<std::string> paths;
  if (format == ReportFormat::Csv) {
    const fs::path p = dir / "rows.csv";
    detail::write_file(p, rows_csv(report));
    paths.push_back(p.string());
  } else {
    const fs::path p = dir / "report.json";
    detail::write_file(p, report_json(report).dump(2) + "\n");
    paths.push_back(p.string());
  }
  const fs::path agg = dir / "aggregates.csv";
  detail::write_file(agg, aggregates_csv(report));
  paths.push_back(agg.string());
  return paths;
}

}  // namespace dvfsim
