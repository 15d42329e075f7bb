#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "dvfsim/rng.hpp"

namespace dvfsim {

/// Thrown by generate_blocks when the requested skew would give some block
/// more hit records than it has records.
class infeasible_skew_error : public std::runtime_error {
 public:
  infeasible_skew_error(std::size_t rank, std::uint64_t hits,
                        std::uint64_t capacity)
      : std::runtime_error("infeasible skew: rank " + std::to_string(rank) +
                           " needs " + std::to_string(hits) +
                           " hit records but block capacity is " +
                           std::to_string(capacity)),
        rank_(rank) {}

  std::size_t rank() const { return rank_; }

 private:
  std::size_t rank_;
};

struct ZipfianParams {
  double z = 0.0;       // skew exponent, >= 0
  std::size_t n = 1;    // number of ranked partitions, >= 1
};

/// Normalized Zipf weights: weight[k-1] = k^-z / sum_{m=1..n} m^-z.
inline std::vector<double> zipf_weights(const ZipfianParams& params) {
  if (params.n == 0) {
    throw std::invalid_argument("zipf_weights: n must be >= 1");
  }
  if (params.z < 0.0 || !std::isfinite(params.z)) {
    throw std::invalid_argument("zipf_weights: z must be finite and >= 0");
  }
  std::vector<double> w(params.n);
  double denom = 0.0;
  for (std::size_t k = 1; k <= params.n; ++k) {
    const double t = std::pow(static_cast<double>(k), -params.z);
    w[k - 1] = t;
    denom += t;
  }
  for (double& x : w) x /= denom;
  return w;
}

/// One equal-size input partition. Per-record cost is bimodal (hit/miss)
/// with optional multiplicative lognormal jitter.
struct DataBlock {
  std::size_t id = 0;  // 1-based rank index
  std::uint64_t record_count = 0;
  std::uint64_t hit_count = 0;
  double cycles_per_hit = 0.0;
  double cycles_per_miss = 0.0;
  double jitter_sigma = 0.0;
  std::uint64_t jitter_seed = 0;
};

struct WorkloadSpec {
  std::size_t n_blocks = 1;
  std::size_t records_per_block = 1;
  std::uint64_t total_hit_records = 0;
  double cycles_per_hit = 0.0;
  double cycles_per_miss = 0.0;
  ZipfianParams zipf;
  std::uint64_t rng_seed = 0;
  bool shuffle_blocks = false;  // seeded shuffle decorrelating rank and slot
  double jitter_sigma = 0.0;    // lognormal sigma on per-record cost

  void validate() const {
    if (n_blocks == 0) throw std::invalid_argument("workload.n_blocks must be >= 1");
    if (records_per_block == 0) {
      throw std::invalid_argument("workload.records_per_block must be >= 1");
    }
    if (zipf.n != n_blocks) {
      throw std::invalid_argument("workload.zipf.n must equal n_blocks");
    }
    if (zipf.z < 0.0) throw std::invalid_argument("workload.zipf.z must be >= 0");
    if (cycles_per_miss < 0.0 || cycles_per_hit < cycles_per_miss) {
      throw std::invalid_argument(
          "workload: require cycles_per_hit >= cycles_per_miss >= 0");
    }
    if (total_hit_records >
        static_cast<std::uint64_t>(n_blocks) * records_per_block) {
      throw std::invalid_argument(
          "workload.total_hit_records exceeds total record count");
    }
    if (jitter_sigma < 0.0) {
      throw std::invalid_argument("workload.jitter_sigma must be >= 0");
    }
  }
};

/// Cost in cycles of one record. Records [0, hit_count) are hits. Jitter is
/// mean-preserving: E[multiplier] = 1.
inline double record_cost(const DataBlock& block, std::uint64_t index) {
  const double base =
      index < block.hit_count ? block.cycles_per_hit : block.cycles_per_miss;
  if (block.jitter_sigma <= 0.0) return base;
  SplitMix64 g(mix_seed(block.jitter_seed, index));
  const double z = g.next_normal();
  const double s = block.jitter_sigma;
  return base * std::exp(s * z - 0.5 * s * s);
}

/// Ground-truth total work of a block in cycles.
inline double true_cycles(const DataBlock& block) {
  if (block.jitter_sigma <= 0.0) {
    return static_cast<double>(block.hit_count) * block.cycles_per_hit +
           static_cast<double>(block.record_count - block.hit_count) *
               block.cycles_per_miss;
  }
  double total = 0.0;
  for (std::uint64_t i = 0; i < block.record_count; ++i) {
    total += record_cost(block, i);
  }
  return total;
}

namespace detail {

/// Largest-remainder apportionment of `total` units over `weights`.
inline std::vector<std::uint64_t> apportion(std::uint64_t total,
                                            const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  std::vector<std::uint64_t> counts(n, 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  remainders.reserve(n);
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double quota = static_cast<double>(total) * weights[i];
    counts[i] = static_cast<std::uint64_t>(std::floor(quota));
    assigned += counts[i];
    remainders.emplace_back(quota - std::floor(quota), i);
  }
  // Ties go to the lower rank.
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::uint64_t r = 0; assigned < total; ++r, ++assigned) {
    counts[remainders[r % n].second] += 1;
  }
  return counts;
}

}  // namespace detail

/// Builds the ranked block list: equal record counts, hit records apportioned
/// by Zipf weight with exact conservation. Deterministic for a fixed seed.
inline std::vector<DataBlock> generate_blocks(const WorkloadSpec& spec) {
  spec.validate();
  const std::vector<double> weights = zipf_weights(spec.zipf);
  const std::vector<std::uint64_t> hits =
      detail::apportion(spec.total_hit_records, weights);

  std::vector<DataBlock> blocks(spec.n_blocks);
  for (std::size_t i = 0; i < spec.n_blocks; ++i) {
    if (hits[i] > spec.records_per_block) {
      throw infeasible_skew_error(i + 1, hits[i], spec.records_per_block);
    }
    blocks[i].id = i + 1;
    blocks[i].record_count = spec.records_per_block;
    blocks[i].hit_count = hits[i];
    blocks[i].cycles_per_hit = spec.cycles_per_hit;
    blocks[i].cycles_per_miss = spec.cycles_per_miss;
    blocks[i].jitter_sigma = spec.jitter_sigma;
    blocks[i].jitter_seed = mix_seed(spec.rng_seed, i + 1);
  }

  if (spec.shuffle_blocks && spec.n_blocks > 1) {
    SplitMix64 g(mix_seed(spec.rng_seed, 0x51afULL));
    for (std::size_t i = spec.n_blocks - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(g.bounded(i + 1));
      std::swap(blocks[i], blocks[j]);
    }
  }
  return blocks;
}

}  // namespace dvfsim
