#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "eftest/nu_measure.hpp"

namespace eftest {

// Monte Carlo table of the pivotal null statistic
//   W = B(1) / sqrt(int nu(d lambda) lambda^2 (B(lambda) - lambda B(1))^2),
// B a standard Brownian motion discretized on path_grid steps. Samples are
// sorted ascending. Tables need at least 10,000 replicates to be usable for
// decisions; a median further than 0.02 from zero (expected only for small
// tables) is surfaced as a warning.
struct QuantileTable {
  NuMeasure nu;
  int path_grid = 0;
  std::int64_t replicates = 0;
  std::uint64_t seed = 0;
  std::uint64_t redraws = 0;  // zero-normalizer paths that were redrawn
  std::vector<double> samples;
  std::vector<std::string> warnings;
};

// Simulates the table. Requires path_grid >= 500 and replicates >= 10,000.
// Bit-identical output for a given (nu, L, R, seed) at any worker count.
QuantileTable simulate_w_table(const NuMeasure& nu, int path_grid,
                               std::int64_t replicates, std::uint64_t seed,
                               int workers = 1);

// Type-7 empirical quantile (linear interpolation); p strictly inside (0,1).
double quantile(const QuantileTable& table, double p);

// P(W > w) under the table: fraction of samples strictly greater. w = -inf
// gives 1, +inf gives 0; NaN is rejected.
double p_value(const QuantileTable& table, double w);

// Content-addressed cache of simulated tables. The filename encodes a hash
// of (nu, path grid, replicates, seed); docs/null-table-cache.md documents
// the byte layout. Format changes bump the version and invalidate.
std::string table_cache_name(const NuMeasure& nu, int path_grid,
                             std::int64_t replicates, std::uint64_t seed);
void save_table(const QuantileTable& table, const std::filesystem::path& file);
QuantileTable load_table(const std::filesystem::path& file);

// Loads the table from `cache_dir` if present, else simulates and saves.
// cache_hit reports which happened (may be null).
QuantileTable load_or_simulate(const NuMeasure& nu, int path_grid,
                               std::int64_t replicates, std::uint64_t seed,
                               const std::filesystem::path& cache_dir,
                               int workers = 1, bool* cache_hit = nullptr);

}  // namespace eftest
