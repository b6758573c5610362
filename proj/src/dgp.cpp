#include "eftest/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "eftest/parallel.hpp"
#include "eftest/rng.hpp"
#include "eftest/selfnorm.hpp"

namespace eftest {

namespace {

void validate_dgp(const DgpConfig& config) {
  for (int c = 0; c < 4; ++c) {
    if (!(config.tau[c] > 0.0)) {
      throw std::invalid_argument("coefficient variances must be positive");
    }
    if (c > 0 && !(config.tau[c] < config.tau[c - 1])) {
      throw std::invalid_argument(
          "coefficient variances must be strictly decreasing");
    }
  }
  if (!(std::fabs(config.rho) < 1.0)) {
    throw std::invalid_argument("autoregression coefficient must satisfy |rho| < 1");
  }
  if (config.burn_in < 30) {
    throw std::invalid_argument("burn-in must be at least 30 steps");
  }
  if (config.m < 2) throw std::invalid_argument("sample needs at least 2 curves");
}

}  // namespace

double phase_to_distance(double delta) { return 2.0 * (1.0 - std::cos(delta)); }

Curve population_eigenfunction(int j, double delta1, double delta2,
                               const Grid& grid) {
  if (j < 1 || j > 4) {
    throw std::invalid_argument("population eigenfunction order must lie in 1..4");
  }
  const double freq = j <= 2 ? 1.0 : 2.0;
  const double phase = j <= 2 ? delta1 : delta2;
  const bool use_sin = (j % 2) == 1;
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> values(grid.size());
  for (int p = 0; p < grid.size(); ++p) {
    const double arg = two_pi * freq * grid.point(p) + phase;
    values[p] = std::sqrt(2.0) * (use_sin ? std::sin(arg) : std::cos(arg));
  }
  // Trapezoid quadrature is already exact for these products; normalizing
  // pins the norm at 1 to rounding regardless of the grid.
  const double nsq = weighted_norm_sq(grid, values);
  const double inv = 1.0 / std::sqrt(nsq);
  for (double& v : values) v *= inv;
  return Curve(grid, std::move(values));
}

CurveSample simulate_sample(const DgpConfig& config) {
  validate_dgp(config);
  const Grid grid(config.grid_points);
  const int p = grid.size();

  std::vector<std::vector<double>> basis(4);
  for (int c = 0; c < 4; ++c) {
    basis[c] =
        population_eigenfunction(c + 1, config.delta1, config.delta2, grid).values;
  }
  std::vector<double> sd(4);
  for (int c = 0; c < 4; ++c) sd[c] = std::sqrt(config.tau[c]);

  RngStream rng(config.seed, config.stream);
  const double innovation_scale = std::sqrt(1.0 - config.rho * config.rho);
  double state[4] = {0.0, 0.0, 0.0, 0.0};
  std::vector<std::vector<double>> rows;
  rows.reserve(config.m);
  const int total = config.burn_in + config.m;
  for (int step = 0; step < total; ++step) {
    for (int c = 0; c < 4; ++c) {
      const double innovation = rng.next_normal() * sd[c];
      state[c] = config.rho * state[c] + innovation_scale * innovation;
    }
    if (step < config.burn_in) continue;
    std::vector<double> row(p, 0.0);
    for (int c = 0; c < 4; ++c) {
      const double coef = state[c];
      const double* phi = basis[c].data();
      for (int k = 0; k < p; ++k) row[k] += coef * phi[k];
    }
    rows.push_back(std::move(row));
  }
  return CurveSample(grid, std::move(rows), config.label);
}

std::vector<PowerPoint> run_power_study(int scenario,
                                        const std::vector<double>& delta_grid,
                                        int m, int n, int replicates,
                                        const PowerStudyConfig& config,
                                        const QuantileTable& table) {
  if (scenario != 1 && scenario != 2) {
    throw std::invalid_argument("scenario must be 1 or 2");
  }
  if (delta_grid.empty()) throw std::invalid_argument("empty phase grid");
  for (double d : delta_grid) {
    if (!std::isfinite(d)) throw std::invalid_argument("non-finite phase");
  }
  if (replicates < 100) {
    throw std::invalid_argument("power studies need at least 100 replicates");
  }
  const int j = config.j > 0 ? config.j : (scenario == 1 ? 1 : 3);

  RelevanceTestConfig test_config;
  test_config.j = j;
  test_config.delta = config.delta_threshold;
  test_config.alpha = config.alpha;
  test_config.nu = table.nu;
  test_config.j_max = j;

  std::vector<PowerPoint> points;
  points.reserve(delta_grid.size());
  for (size_t d = 0; d < delta_grid.size(); ++d) {
    const double phase = delta_grid[d];
    std::vector<char> rejected(replicates, 0);
    // Substream address: point index in the high bits, replicate below it,
    // lowest bit selects the sample. Deterministic at any worker count.
    const std::uint64_t base = static_cast<std::uint64_t>(d) << 33;
    parallel_for(replicates, config.workers, [&](int rep) {
      DgpConfig gen;
      gen.tau = config.tau;
      gen.rho = config.rho;
      gen.burn_in = config.burn_in;
      gen.grid_points = config.grid_points;
      gen.seed = config.master_seed;
      gen.delta1 = scenario == 1 ? phase : 0.0;
      gen.delta2 = scenario == 2 ? phase : 0.0;
      gen.m = m;
      gen.stream = base | (static_cast<std::uint64_t>(rep) << 1);
      gen.label = "x";
      const CurveSample x = simulate_sample(gen);
      gen.delta1 = 0.0;
      gen.delta2 = 0.0;
      gen.m = n;
      gen.stream = base | (static_cast<std::uint64_t>(rep) << 1) | 1u;
      gen.label = "y";
      const CurveSample y = simulate_sample(gen);
      rejected[rep] = test_eigenfunction(x, y, test_config, table).reject ? 1 : 0;
    });
    long count = 0;
    for (char r : rejected) count += r;
    PowerPoint point;
    point.scenario = scenario;
    point.delta = phase;
    point.distance = phase_to_distance(phase);
    point.m = m;
    point.n = n;
    point.replicates = replicates;
    point.rejection_rate = static_cast<double>(count) / replicates;
    points.push_back(point);
  }
  return points;
}

void write_power_csv(const std::vector<PowerPoint>& points, std::ostream& out) {
  out << "scenario,delta,distance,m,n,replicates,rejection_rate\n";
  char buf[64];
  for (const PowerPoint& p : points) {
    out << p.scenario << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", p.delta);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", p.distance);
    out << buf << ',';
    out << p.m << ',' << p.n << ',' << p.replicates << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", p.rejection_rate);
    out << buf << '\n';
  }
}

}  // namespace eftest
