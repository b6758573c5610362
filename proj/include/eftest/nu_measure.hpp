#pragma once

#include <vector>

namespace eftest {

// Discretized weighting measure nu on [lower, 1] for the self-normalizer:
// integrals against nu are plain means over lambda_grid. The grid is strictly
// increasing, starts at or above `lower`, and ends exactly at 1.
struct NuMeasure {
  double lower = 0.1;
  std::vector<double> lambda_grid;

  // Equally spaced grid of `points` values from `lower` to 1 inclusive.
  static NuMeasure uniform(double lower = 0.1, int points = 91);

  bool same_as(const NuMeasure& other, double tol = 1e-12) const;
};

// Throws std::invalid_argument when the measure violates its invariants.
void validate(const NuMeasure& nu);

}  // namespace eftest
