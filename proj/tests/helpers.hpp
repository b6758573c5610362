#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "eftest/grid.hpp"
#include "eftest/null_law.hpp"
#include "eftest/rng.hpp"

namespace eftest::testing {

// Smooth random curve: a low-order random trig polynomial evaluated on the
// grid. Deterministic in (seed, stream).
inline std::vector<double> random_curve(const Grid& grid, std::uint64_t seed,
                                        std::uint64_t stream) {
  RngStream rng(seed, stream);
  const int harmonics = 4;
  std::vector<double> a(harmonics), b(harmonics);
  for (int h = 0; h < harmonics; ++h) {
    a[h] = rng.next_normal();
    b[h] = rng.next_normal();
  }
  const double level = rng.next_normal();
  std::vector<double> values(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double t = grid.point(i);
    double v = level;
    for (int h = 0; h < harmonics; ++h) {
      v += a[h] * std::sin(2.0 * M_PI * (h + 1) * t) +
           b[h] * std::cos(2.0 * M_PI * (h + 1) * t);
    }
    values[i] = v;
  }
  return values;
}

inline CurveSample random_sample(const Grid& grid, int count,
                                 std::uint64_t seed, std::uint64_t stream0 = 0,
                                 const std::string& label = "") {
  std::vector<std::vector<double>> rows;
  rows.reserve(count);
  for (int i = 0; i < count; ++i) {
    rows.push_back(random_curve(grid, seed, stream0 + i));
  }
  return CurveSample(grid, std::move(rows), label);
}

// One modest null table shared across a test binary. Simulated once.
inline const QuantileTable& shared_table() {
  static const QuantileTable table =
      simulate_w_table(NuMeasure::uniform(), 500, 10000, 20240817u, 1);
  return table;
}

inline bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol;
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace eftest::testing
