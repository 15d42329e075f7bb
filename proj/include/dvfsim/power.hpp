#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dvfsim {

struct FrequencyLevel {
  double ghz = 0.0;

  double cycles_per_second() const { return ghz * 1e9; }

  friend bool operator==(FrequencyLevel a, FrequencyLevel b) {
    return a.ghz == b.ghz;
  }
  friend bool operator<(FrequencyLevel a, FrequencyLevel b) {
    return a.ghz < b.ghz;
  }
};

/// Full-load power as a function of frequency. Either the power law
///   p_full(f) = p_idle + (p_full_at_anchor - p_idle) * (f / anchor)^alpha
/// or an explicit measured table with piecewise-linear interpolation.
struct PowerCurve {
  double p_idle = 100.0;           // watts
  double anchor_freq = 2.8;        // GHz
  double p_full_at_anchor = 200.0; // watts
  double exponent_alpha = 3.0;
  std::vector<std::pair<double, double>> table;  // (GHz, p_full watts), optional

  void validate() const {
    if (p_idle < 0.0 || p_full_at_anchor <= p_idle) {
      throw std::invalid_argument(
          "power curve: require p_full_at_anchor > p_idle >= 0");
    }
    if (anchor_freq <= 0.0) {
      throw std::invalid_argument("power curve: anchor_freq must be > 0");
    }
    if (exponent_alpha < 0.0) {
      throw std::invalid_argument("power curve: exponent_alpha must be >= 0");
    }
    if (!table.empty()) {
      for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i].first <= 0.0 || table[i].second < p_idle) {
          throw std::invalid_argument(
              "power curve table: frequencies must be > 0 and power >= p_idle");
        }
        if (i > 0 && (table[i].first <= table[i - 1].first ||
                      table[i].second < table[i - 1].second)) {
          throw std::invalid_argument(
              "power curve table: must be strictly ascending in frequency and "
              "non-decreasing in power");
        }
      }
    }
  }
};

enum class EnergyMode {
  SlotAverage,      // slot duration x slot-average power
  BusyTimeLiteral,  // busy time x busy power
};

struct ServerModel {
  std::vector<FrequencyLevel> frequencies;  // strictly ascending
  PowerCurve curve;
  double u_full = 1.0;  // CPU utilization at full load, in (0, 1]

  FrequencyLevel f_max() const { return frequencies.back(); }

  void validate() const {
    if (frequencies.empty()) {
      throw std::invalid_argument("server: at least one frequency required");
    }
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
      if (frequencies[i].ghz <= 0.0) {
        throw std::invalid_argument("server: frequencies must be > 0");
      }
      if (i > 0 && !(frequencies[i - 1] < frequencies[i])) {
        throw std::invalid_argument("server: frequencies must be strictly ascending");
      }
    }
    if (!(u_full > 0.0 && u_full <= 1.0)) {
      throw std::invalid_argument("server: u_full must be in (0, 1]");
    }
    curve.validate();
  }
};

/// Full-load power at frequency f.
inline double p_full_at(const PowerCurve& curve, FrequencyLevel f) {
  if (f.ghz <= 0.0) throw std::invalid_argument("p_full_at: frequency must be > 0");
  if (curve.table.empty()) {
    return curve.p_idle + (curve.p_full_at_anchor - curve.p_idle) *
                              std::pow(f.ghz / curve.anchor_freq,
                                       curve.exponent_alpha);
  }
  const auto& t = curve.table;
  if (f.ghz < t.front().first || f.ghz > t.back().first) {
    throw std::out_of_range("p_full_at: frequency " + std::to_string(f.ghz) +
                            " GHz outside table range");
  }
  auto hi = std::lower_bound(
      t.begin(), t.end(), f.ghz,
      [](const std::pair<double, double>& e, double x) { return e.first < x; });
  if (hi->first == f.ghz) return hi->second;
  auto lo = hi - 1;
  const double w = (f.ghz - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

/// UF = PT / TS. Values above 1 mean slot overrun and are returned as-is.
inline double utilize_factor(double pt, double ts) {
  if (ts <= 0.0) throw std::invalid_argument("utilize_factor: ts must be > 0");
  if (pt < 0.0) throw std::invalid_argument("utilize_factor: pt must be >= 0");
  return pt / ts;
}

inline double cpu_utilization(double uf, double u_full) {
  if (uf < 0.0) throw std::invalid_argument("cpu_utilization: uf must be >= 0");
  if (!(u_full > 0.0 && u_full <= 1.0)) {
    throw std::invalid_argument("cpu_utilization: u_full must be in (0, 1]");
  }
  return uf * u_full;
}

inline double busy_power(const ServerModel& server, FrequencyLevel f,
                         double u_cpu) {
  if (u_cpu < 0.0 || u_cpu > 1.0) {
    throw std::invalid_argument("busy_power: u_cpu must be in [0, 1]");
  }
  return (p_full_at(server.curve, f) - server.curve.p_idle) * u_cpu +
         server.curve.p_idle;
}

/// Energy of one slot holding pt seconds of busy time at frequency f.
///
/// SlotAverage: dynamic energy over the busy time plus the idle base over the
/// whole slot; overrun time accrues the idle base too, so the slot is charged
/// max(ts, pt) * p_idle.
/// BusyTimeLiteral: busy time times busy power, nothing for the idle tail.
inline double slot_energy(const ServerModel& server, FrequencyLevel f,
                          double pt, double ts, EnergyMode mode) {
  if (pt < 0.0) throw std::invalid_argument("slot_energy: pt must be >= 0");
  if (ts <= 0.0) throw std::invalid_argument("slot_energy: ts must be > 0");
  switch (mode) {
    case EnergyMode::SlotAverage: {
      const double dynamic =
          pt * (p_full_at(server.curve, f) - server.curve.p_idle) * server.u_full;
      return dynamic + std::max(ts, pt) * server.curve.p_idle;
    }
    case EnergyMode::BusyTimeLiteral:
      return pt * busy_power(server, f, server.u_full);
  }
  throw std::logic_error("slot_energy: unknown mode");
}

inline double total_energy(const std::vector<double>& per_slot_energies) {
  return std::accumulate(per_slot_energies.begin(), per_slot_energies.end(), 0.0);
}

}  // namespace dvfsim
