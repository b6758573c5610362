#include "eftest/selfnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "eftest/errors.hpp"

namespace eftest {

namespace {

void validate_config(const RelevanceTestConfig& config) {
  if (config.j < 1) throw std::invalid_argument("order j must be at least 1");
  if (!(config.delta > 0.0)) {
    throw std::invalid_argument("relevance margin delta must be positive");
  }
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw std::invalid_argument("level alpha must lie strictly inside (0,1)");
  }
  if (config.j_max != 0 && config.j_max < config.j) {
    throw std::invalid_argument("j_max must be 0 or at least j");
  }
  validate(config.nu);
}

void validate_table(const QuantileTable& table, const NuMeasure& nu) {
  if (table.replicates < 10000 ||
      table.samples.size() != static_cast<size_t>(table.replicates)) {
    throw std::invalid_argument("null table is unusable (needs >= 10,000 samples)");
  }
  if (!table.nu.same_as(nu)) {
    throw std::invalid_argument(
        "null table was simulated under a different weighting measure");
  }
}

std::vector<double> diff_values(const std::vector<double>& a,
                                const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

struct ProcessStats {
  double d_hat = 0.0;
  double normalizer = 0.0;
};

// Shared degenerate-normalizer handling: W is +/- infinity by the sign of
// D - delta; D == delta with a zero normalizer pins p = 1, no rejection.
TestResult finish_test(TestKind kind, const RelevanceTestConfig& config, int m,
                       int n, const ProcessStats& stats,
                       const QuantileTable& table,
                       std::vector<std::string> warnings) {
  TestResult result;
  result.kind = kind;
  result.j = config.j;
  result.delta = config.delta;
  result.alpha = config.alpha;
  result.m = m;
  result.n = n;
  result.d_hat = stats.d_hat;
  result.v_hat = stats.normalizer;
  result.warnings = std::move(warnings);
  if (stats.normalizer > 0.0) {
    result.w_hat = (stats.d_hat - config.delta) / stats.normalizer;
  } else {
    const double gap = stats.d_hat - config.delta;
    result.w_hat = gap > 0.0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
    result.warnings.push_back(
        gap == 0.0 ? "degenerate normalizer with D equal to delta; p pinned to 1"
                   : "degenerate normalizer: statistic is infinite");
  }
  result.q_alpha = quantile(table, 1.0 - config.alpha);
  result.p_value = p_value(table, result.w_hat);
  result.reject = result.w_hat > result.q_alpha;
  return result;
}

}  // namespace

EigenPath::EigenPath(const CurveSample& x, const CurveSample& y,
                     const NuMeasure& nu, int j_max)
    : j_max_(j_max) {
  if (x.grid() != y.grid()) {
    throw std::invalid_argument("samples must share a grid");
  }
  validate(nu);
  if (j_max < 1 || j_max > x.grid().size()) {
    throw std::invalid_argument("j_max must lie in [1, grid size]");
  }
  lambdas_ = nu.lambda_grid;
  const int m = x.size();
  const int n = y.size();
  const int q = points();
  empty_.assign(q, 0);
  slot_.assign(q, -1);

  // X systems depend only on floor(m lambda); decompose each distinct count
  // once and align it to the full-sample system.
  std::map<int, int> x_slot_of_k;
  std::vector<EigenSystem> x_aligned;
  EigenSystem x_full = sample_eigensystem(x, m, j_max);
  std::map<int, EigenSystem> y_raw;

  std::map<std::pair<int, int>, int> pair_slot;
  for (int idx = 0; idx < q; ++idx) {
    const int kx = partial_count(m, lambdas_[idx]);
    const int ky = partial_count(n, lambdas_[idx]);
    if (kx < 1 || ky < 1) {
      empty_[idx] = 1;
      continue;
    }
    const auto key = std::make_pair(kx, ky);
    auto found = pair_slot.find(key);
    if (found != pair_slot.end()) {
      slot_[idx] = found->second;
      continue;
    }
    auto xs = x_slot_of_k.find(kx);
    if (xs == x_slot_of_k.end()) {
      EigenSystem sys = kx == m ? x_full
                                : align_signs(x_full, sample_eigensystem(x, kx, j_max));
      x_aligned.push_back(std::move(sys));
      xs = x_slot_of_k.emplace(kx, static_cast<int>(x_aligned.size()) - 1).first;
    }
    auto ys = y_raw.find(ky);
    if (ys == y_raw.end()) {
      ys = y_raw.emplace(ky, sample_eigensystem(y, ky, j_max)).first;
    }
    const EigenSystem& xsys = x_aligned[xs->second];
    EigenSystem ysys = align_signs(xsys, ys->second);

    std::vector<double> nsq(j_max);
    for (int j = 0; j < j_max; ++j) {
      nsq[j] = weighted_norm_sq(
          x.grid(), diff_values(xsys.eigenfunctions[j], ysys.eigenfunctions[j]));
    }
    x_sys_.push_back(xsys);
    y_sys_.push_back(std::move(ysys));
    diff_nsq_.push_back(std::move(nsq));
    const int slot = static_cast<int>(x_sys_.size()) - 1;
    pair_slot.emplace(key, slot);
    slot_[idx] = slot;
  }

  // Summarize spectral health once instead of repeating per lambda.
  std::set<std::string> notes;
  for (size_t s = 0; s < x_sys_.size(); ++s) {
    for (const EigenSystem* sys : {&x_sys_[s], &y_sys_[s]}) {
      if (sys->ill_separated) notes.insert("ill-separated eigenvalues along the partial-sample path");
      if (sys->degenerate) notes.insert("degenerate partial-sample eigensystem along the path");
    }
  }
  warnings_.assign(notes.begin(), notes.end());
}

double EigenPath::diff_norm_sq(int idx, int j) const {
  if (empty_[idx]) return 0.0;
  return diff_nsq_[slot_[idx]][j - 1];
}

double EigenPath::tau_x(int idx, int j) const {
  if (empty_[idx]) return 0.0;
  return x_sys_[slot_[idx]].eigenvalues[j - 1];
}

double EigenPath::tau_y(int idx, int j) const {
  if (empty_[idx]) return 0.0;
  return y_sys_[slot_[idx]].eigenvalues[j - 1];
}

std::vector<double> EigenPath::x_function(int idx, int j) const {
  return x_sys_[slot_[idx]].eigenfunctions[j - 1];
}

std::vector<double> EigenPath::y_function(int idx, int j) const {
  return y_sys_[slot_[idx]].eigenfunctions[j - 1];
}

namespace {

// D and V for the eigenfunction test from a precomputed path.
ProcessStats function_stats(const EigenPath& path, int j) {
  ProcessStats stats;
  const int q = path.points();
  stats.d_hat = path.diff_norm_sq(q - 1, j);
  double acc = 0.0;
  for (int idx = 0; idx < q; ++idx) {
    const double lam = path.lambda(idx);
    const double lam2 = lam * lam;
    const double process = lam2 * path.diff_norm_sq(idx, j);
    const double bracket = process - lam2 * stats.d_hat;
    acc += bracket * bracket;
  }
  stats.normalizer = std::sqrt(acc / q);
  return stats;
}

// D and M for the eigenvalue test: the weighted gap process
// T(lambda) = lambda (tau_x - tau_y), compared against lambda^2 T(1)^2.
ProcessStats value_stats(const EigenPath& path, int j) {
  ProcessStats stats;
  const int q = path.points();
  const double t1 = path.tau_x(q - 1, j) - path.tau_y(q - 1, j);
  stats.d_hat = t1 * t1;
  double acc = 0.0;
  for (int idx = 0; idx < q; ++idx) {
    const double lam = path.lambda(idx);
    const double t = lam * (path.tau_x(idx, j) - path.tau_y(idx, j));
    const double bracket = t * t - lam * lam * stats.d_hat;
    acc += bracket * bracket;
  }
  stats.normalizer = std::sqrt(acc / q);
  return stats;
}

}  // namespace

Curve dhat_process(const CurveSample& x, const CurveSample& y, int j,
                   double lambda) {
  if (x.grid() != y.grid()) {
    throw std::invalid_argument("samples must share a grid");
  }
  if (j < 1 || j > x.grid().size()) {
    throw std::invalid_argument("order j must lie in [1, grid size]");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0,1]");
  }
  const int kx = partial_count(x.size(), lambda);
  const int ky = partial_count(y.size(), lambda);
  if (kx < 1 || ky < 1) {
    return Curve(x.grid(), std::vector<double>(x.grid().size(), 0.0));
  }
  EigenSystem x_full = sample_eigensystem(x, x.size(), j);
  EigenSystem x_lam =
      kx == x.size() ? x_full : align_signs(x_full, sample_eigensystem(x, kx, j));
  EigenSystem y_lam = align_signs(x_lam, sample_eigensystem(y, ky, j));
  std::vector<double> values(x.grid().size());
  const std::vector<double>& vx = x_lam.eigenfunctions[j - 1];
  const std::vector<double>& vy = y_lam.eigenfunctions[j - 1];
  for (size_t p = 0; p < values.size(); ++p) values[p] = lambda * (vx[p] - vy[p]);
  return Curve(x.grid(), std::move(values));
}

double dhat_distance(const CurveSample& x, const CurveSample& y, int j) {
  return norm_sq(dhat_process(x, y, j, 1.0));
}

double vhat(const CurveSample& x, const CurveSample& y, int j,
            const NuMeasure& nu) {
  if (j < 1) throw std::invalid_argument("order j must be at least 1");
  EigenPath path(x, y, nu, j);
  return function_stats(path, j).normalizer;
}

TestResult test_eigenfunction(const CurveSample& x, const CurveSample& y,
                              const RelevanceTestConfig& config,
                              const QuantileTable& table) {
  validate_config(config);
  validate_table(table, config.nu);
  const int j_max = config.j_max == 0 ? config.j : config.j_max;
  EigenPath path(x, y, config.nu, j_max);
  TestResult result = finish_test(TestKind::eigenfunction, config, x.size(),
                                  y.size(), function_stats(path, config.j),
                                  table, path.warnings());
  return result;
}

std::vector<TestResult> test_eigenfunction_family(
    const CurveSample& x, const CurveSample& y, const std::vector<int>& js,
    const std::vector<double>& deltas, double alpha, const NuMeasure& nu,
    const QuantileTable& table) {
  if (js.empty() || js.size() != deltas.size()) {
    throw std::invalid_argument("family needs matching, nonempty js and deltas");
  }
  int j_max = 1;
  for (int j : js) j_max = std::max(j_max, j);
  RelevanceTestConfig probe;
  probe.alpha = alpha;
  probe.nu = nu;
  probe.j_max = j_max;
  validate_table(table, nu);
  EigenPath path(x, y, nu, j_max);
  std::vector<TestResult> results;
  results.reserve(js.size());
  for (size_t i = 0; i < js.size(); ++i) {
    RelevanceTestConfig config = probe;
    config.j = js[i];
    config.delta = deltas[i];
    validate_config(config);
    results.push_back(finish_test(TestKind::eigenfunction, config, x.size(),
                                  y.size(), function_stats(path, config.j),
                                  table, path.warnings()));
  }
  return results;
}

TestResult test_eigenvalue(const CurveSample& x, const CurveSample& y,
                           const RelevanceTestConfig& config,
                           const QuantileTable& table) {
  validate_config(config);
  validate_table(table, config.nu);
  const int j_max = config.j_max == 0 ? config.j : config.j_max;
  EigenPath path(x, y, config.nu, j_max);
  return finish_test(TestKind::eigenvalue, config, x.size(), y.size(),
                     value_stats(path, config.j), table, path.warnings());
}

}  // namespace eftest
