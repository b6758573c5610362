#include "eftest/null_law.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "eftest/errors.hpp"
#include "eftest/numerics.hpp"
#include "eftest/parallel.hpp"
#include "eftest/rng.hpp"

namespace eftest {

NuMeasure NuMeasure::uniform(double lower, int points) {
  if (!(lower > 0.0 && lower < 1.0)) {
    throw std::invalid_argument("nu lower bound must lie strictly inside (0,1)");
  }
  if (points < 2) throw std::invalid_argument("nu grid needs at least 2 points");
  NuMeasure nu;
  nu.lower = lower;
  nu.lambda_grid.resize(points);
  const double step = (1.0 - lower) / (points - 1);
  for (int i = 0; i < points; ++i) nu.lambda_grid[i] = lower + i * step;
  nu.lambda_grid.back() = 1.0;
  return nu;
}

bool NuMeasure::same_as(const NuMeasure& other, double tol) const {
  if (lambda_grid.size() != other.lambda_grid.size()) return false;
  if (std::fabs(lower - other.lower) > tol) return false;
  for (size_t i = 0; i < lambda_grid.size(); ++i) {
    if (std::fabs(lambda_grid[i] - other.lambda_grid[i]) > tol) return false;
  }
  return true;
}

void validate(const NuMeasure& nu) {
  if (!(nu.lower > 0.0 && nu.lower < 1.0)) {
    throw std::invalid_argument("nu lower bound must lie strictly inside (0,1)");
  }
  if (nu.lambda_grid.empty()) {
    throw std::invalid_argument("nu grid must be nonempty");
  }
  double prev = nu.lower - 1e-12;
  for (double v : nu.lambda_grid) {
    if (!(v > prev)) {
      throw std::invalid_argument(
          "nu grid must be strictly increasing and start at or above lower");
    }
    prev = v;
  }
  if (nu.lambda_grid.back() != 1.0) {
    throw std::invalid_argument("nu grid must end exactly at 1");
  }
}

QuantileTable simulate_w_table(const NuMeasure& nu, int path_grid,
                               std::int64_t replicates, std::uint64_t seed,
                               int workers) {
  validate(nu);
  if (path_grid < 500) {
    throw std::invalid_argument("path grid needs at least 500 steps");
  }
  if (replicates < 10000) {
    throw std::invalid_argument(
        "null tables need at least 10,000 replicates to be usable");
  }
  if (replicates > 1000000000) {
    throw std::invalid_argument("replicate count is implausibly large");
  }
  if (workers < 1) throw std::invalid_argument("worker count must be positive");
  const int L = path_grid;
  const int q = static_cast<int>(nu.lambda_grid.size());
  std::vector<int> index(q);
  for (int i = 0; i < q; ++i) index[i] = partial_count(L, nu.lambda_grid[i]);

  QuantileTable table;
  table.nu = nu;
  table.path_grid = L;
  table.replicates = replicates;
  table.seed = seed;
  table.samples.resize(replicates);
  std::atomic<std::uint64_t> redraws{0};

  const double step_sd = std::sqrt(1.0 / L);
  const int n = static_cast<int>(replicates);
  parallel_for(n, workers, [&](int r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    std::vector<double> path(L + 1);
    for (int attempt = 0; attempt < 100; ++attempt) {
      path[0] = 0.0;
      for (int i = 1; i <= L; ++i) {
        path[i] = path[i - 1] + step_sd * rng.next_normal();
      }
      const double b1 = path[L];
      double acc = 0.0;
      for (int i = 0; i < q; ++i) {
        const double lam = nu.lambda_grid[i];
        const double bridge = path[index[i]] - lam * b1;
        acc += lam * lam * bridge * bridge;
      }
      const double denom_sq = acc / q;
      if (denom_sq > 0.0) {
        table.samples[r] = b1 / std::sqrt(denom_sq);
        return;
      }
      redraws.fetch_add(1);
    }
    throw numeric_error("null simulation kept drawing zero normalizers");
  });
  table.redraws = redraws.load();

  std::sort(table.samples.begin(), table.samples.end());
  const double med = quantile(table, 0.5);
  if (std::fabs(med) > 0.02) {
    table.warnings.push_back(
        "table median is further than 0.02 from zero; expected only for "
        "small replicate counts");
  }
  return table;
}

double quantile(const QuantileTable& table, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("quantile needs p strictly inside (0,1)");
  }
  if (table.samples.empty()) throw std::invalid_argument("empty table");
  const std::int64_t r = static_cast<std::int64_t>(table.samples.size());
  const double h = (r - 1) * p;
  std::int64_t lo = static_cast<std::int64_t>(std::floor(h));
  if (lo > r - 2) lo = r - 2;
  const double frac = h - lo;
  return table.samples[lo] + frac * (table.samples[lo + 1] - table.samples[lo]);
}

double p_value(const QuantileTable& table, double w) {
  if (std::isnan(w)) throw std::invalid_argument("p_value of NaN");
  if (table.samples.empty()) throw std::invalid_argument("empty table");
  const auto it =
      std::upper_bound(table.samples.begin(), table.samples.end(), w);
  const auto greater = table.samples.end() - it;
  return static_cast<double>(greater) / static_cast<double>(table.samples.size());
}

namespace {

constexpr char kMagic[4] = {'W', 'T', 'A', 'B'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kNuKindUniformGrid = 0;

std::uint64_t fnv1a(const void* bytes, size_t size, std::uint64_t hash) {
  const unsigned char* b = static_cast<const unsigned char*>(bytes);
  for (size_t i = 0; i < size; ++i) {
    hash ^= b[i];
    hash *= 1099511628211ull;
  }
  return hash;
}

template <class T>
void write_pod(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
void read_pod(std::ifstream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
}

}  // namespace

std::string table_cache_name(const NuMeasure& nu, int path_grid,
                             std::int64_t replicates, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ull;
  h = fnv1a("eftest-wtable-v1", 16, h);
  h = fnv1a(&nu.lower, sizeof(nu.lower), h);
  const std::uint64_t grid_size = nu.lambda_grid.size();
  h = fnv1a(&grid_size, sizeof(grid_size), h);
  h = fnv1a(nu.lambda_grid.data(), nu.lambda_grid.size() * sizeof(double), h);
  const std::int64_t l64 = path_grid;
  h = fnv1a(&l64, sizeof(l64), h);
  h = fnv1a(&replicates, sizeof(replicates), h);
  h = fnv1a(&seed, sizeof(seed), h);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string("wtable_") + buf + ".bin";
}

void save_table(const QuantileTable& table, const std::filesystem::path& file) {
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot write cache file " + tmp.string());
    out.write(kMagic, 4);
    write_pod(out, kVersion);
    write_pod(out, kNuKindUniformGrid);
    const std::uint32_t grid_size =
        static_cast<std::uint32_t>(table.nu.lambda_grid.size());
    write_pod(out, grid_size);
    write_pod(out, table.nu.lower);
    out.write(reinterpret_cast<const char*>(table.nu.lambda_grid.data()),
              grid_size * sizeof(double));
    const std::uint32_t l = static_cast<std::uint32_t>(table.path_grid);
    write_pod(out, l);
    const std::uint64_t r = static_cast<std::uint64_t>(table.replicates);
    write_pod(out, r);
    write_pod(out, table.seed);
    write_pod(out, table.redraws);
    out.write(reinterpret_cast<const char*>(table.samples.data()),
              table.samples.size() * sizeof(double));
    if (!out) throw data_error("short write to cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

QuantileTable load_table(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw data_error("cannot open cache file " + file.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw data_error("not a null-table cache file: " + file.string());
  }
  std::uint32_t version = 0, kind = 0, grid_size = 0;
  read_pod(in, version);
  read_pod(in, kind);
  if (version != kVersion || kind != kNuKindUniformGrid) {
    throw data_error("unsupported cache format version in " + file.string());
  }
  read_pod(in, grid_size);
  QuantileTable table;
  read_pod(in, table.nu.lower);
  if (!in || grid_size == 0 || grid_size > 1000000) {
    throw data_error("corrupt cache header in " + file.string());
  }
  table.nu.lambda_grid.resize(grid_size);
  in.read(reinterpret_cast<char*>(table.nu.lambda_grid.data()),
          grid_size * sizeof(double));
  std::uint32_t l = 0;
  std::uint64_t r = 0;
  read_pod(in, l);
  read_pod(in, r);
  read_pod(in, table.seed);
  read_pod(in, table.redraws);
  if (!in || l < 500 || r < 10000 || r > 2000000000ull) {
    throw data_error("corrupt cache header in " + file.string());
  }
  table.path_grid = static_cast<int>(l);
  table.replicates = static_cast<std::int64_t>(r);
  table.samples.resize(r);
  in.read(reinterpret_cast<char*>(table.samples.data()), r * sizeof(double));
  if (!in || in.gcount() != static_cast<std::streamsize>(r * sizeof(double))) {
    throw data_error("truncated cache file " + file.string());
  }
  validate(table.nu);
  if (!std::is_sorted(table.samples.begin(), table.samples.end())) {
    throw data_error("cache samples are not sorted in " + file.string());
  }
  return table;
}

QuantileTable load_or_simulate(const NuMeasure& nu, int path_grid,
                               std::int64_t replicates, std::uint64_t seed,
                               const std::filesystem::path& cache_dir,
                               int workers, bool* cache_hit) {
  validate(nu);
  std::filesystem::create_directories(cache_dir);
  const std::filesystem::path file =
      cache_dir / table_cache_name(nu, path_grid, replicates, seed);
  if (std::filesystem::exists(file)) {
    try {
      QuantileTable table = load_table(file);
      if (table.nu.same_as(nu) && table.path_grid == path_grid &&
          table.replicates == replicates && table.seed == seed) {
        if (cache_hit) *cache_hit = true;
        return table;
      }
    } catch (const data_error&) {
      // Invalid or stale file: fall through and re-simulate.
    }
  }
  QuantileTable table = simulate_w_table(nu, path_grid, replicates, seed, workers);
  save_table(table, file);
  if (cache_hit) *cache_hit = false;
  return table;
}

}  // namespace eftest
