#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "eftest/grid.hpp"
#include "eftest/null_law.hpp"
#include "eftest/nu_measure.hpp"

namespace eftest {

// Curves X_i = sum_j xi_{i,j} phi_j with a 4-dimensional Fourier system and
// a vector AR(1) coefficient process: xi_i = rho xi_{i-1} + sqrt(1-rho^2) e_i,
// e_i ~ N(0, diag(tau)), started at zero and burned in. tau is strictly
// decreasing and positive, so phi_j is the j-th population eigenfunction
// with eigenvalue tau_j.
struct DgpConfig {
  std::array<double, 4> tau{8.0, 4.0, 0.5, 0.3};
  double rho = 0.5;
  double delta1 = 0.0;  // phase of the first sin/cos pair
  double delta2 = 0.0;  // phase of the second pair
  int m = 100;
  int burn_in = 30;
  int grid_points = 201;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  // substream selector (replicate id etc.)
  std::string label = "dgp";
};

CurveSample simulate_sample(const DgpConfig& config);

// phi_j for j in 1..4: sqrt(2) sin(2 pi t + d1), sqrt(2) cos(2 pi t + d1),
// sqrt(2) sin(4 pi t + d2), sqrt(2) cos(4 pi t + d2), normalized to unit
// quadrature norm on the grid.
Curve population_eigenfunction(int j, double delta1, double delta2,
                               const Grid& grid);

// Squared L2 distance between a unit Fourier pair at phase delta and the
// same pair at phase 0: 2 (1 - cos delta).
double phase_to_distance(double delta);

struct PowerPoint {
  int scenario = 1;
  double delta = 0.0;     // phase of the varied pair
  double distance = 0.0;  // population squared distance at that phase
  int m = 0;
  int n = 0;
  int replicates = 0;
  double rejection_rate = 0.0;
};

struct PowerStudyConfig {
  int j = 0;  // tested order; 0 picks the scenario default (1 resp. 3)
  double delta_threshold = 0.1;
  double alpha = 0.05;
  std::array<double, 4> tau{8.0, 4.0, 0.5, 0.3};
  double rho = 0.5;
  int burn_in = 30;
  int grid_points = 201;
  std::uint64_t master_seed = 12345;
  int workers = 1;
};

// Rejection rate of the eigenfunction test across replicates for each phase
// in delta_grid. Scenario 1 varies delta1 (tests j = 1 by default), scenario
// 2 varies delta2 (tests j = 3 by default); the second sample always uses
// phase zero. Deterministic for a fixed master seed at any worker count:
// replicate r of point d draws from substreams addressed by (d, r).
std::vector<PowerPoint> run_power_study(int scenario,
                                        const std::vector<double>& delta_grid,
                                        int m, int n, int replicates,
                                        const PowerStudyConfig& config,
                                        const QuantileTable& table);

// CSV with header scenario,delta,distance,m,n,replicates,rejection_rate.
void write_power_csv(const std::vector<PowerPoint>& points,
                     std::ostream& out);

}  // namespace eftest
