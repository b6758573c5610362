#include "eftest/longrun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "eftest/errors.hpp"

namespace eftest {

ScoreKernel score_kernel(const EigenSystem& own, const EigenSystem& other,
                         int j, int K) {
  if (own.grid != other.grid) {
    throw std::invalid_argument("score kernel needs a shared grid");
  }
  if (j < 1 || K < j) throw std::invalid_argument("need 1 <= j <= K");
  if (own.count() < K || other.count() < j) {
    throw std::invalid_argument("not enough eigenpairs for the truncation");
  }
  const double tau1 = own.eigenvalues[0];
  for (int k = 1; k < K; ++k) {
    if (own.eigenvalues[k - 1] - own.eigenvalues[k] < 1e-10 * tau1) {
      throw numeric_error(
          "eigenvalue spacing among the first " + std::to_string(K) +
          " eigenvalues is degenerate; the influence kernel is undefined");
    }
  }
  const Grid& grid = own.grid;
  const int p = grid.size();
  ScoreKernel kernel(grid, Matrix(p, p, 0.0));
  kernel.truncation = K;

  const std::vector<double>& vj = own.eigenfunctions[j - 1];
  const std::vector<double>& vj_other = other.eigenfunctions[j - 1];
  std::vector<double> g(p, 0.0);
  for (int k = 1; k <= K; ++k) {
    if (k == j) continue;
    const double coupling =
        weighted_dot(grid, own.eigenfunctions[k - 1], vj_other);
    const double weight =
        coupling / (own.eigenvalues[j - 1] - own.eigenvalues[k - 1]);
    const std::vector<double>& vk = own.eigenfunctions[k - 1];
    for (int s = 0; s < p; ++s) g[s] += weight * vk[s];
  }
  for (int a = 0; a < p; ++a) {
    double* row = kernel.matrix.row_ptr(a);
    const double lead = -vj[a];
    for (int b = 0; b < p; ++b) row[b] = lead * g[b];
  }

  // Empirical spacing at order j bounds the kernel: ||f||^2 <= 1 / S_j^2.
  double spacing = std::numeric_limits<double>::infinity();
  if (j > 1) spacing = std::min(spacing, own.eigenvalues[j - 2] - own.eigenvalues[j - 1]);
  if (j < K) spacing = std::min(spacing, own.eigenvalues[j - 1] - own.eigenvalues[j]);
  if (std::isfinite(spacing)) {
    if (spacing < 1e-6) {
      kernel.warnings.push_back(
          "eigenvalue spacing at the tested order is below 1e-6; the "
          "influence kernel bound is weak");
    }
    const double norm_sq_bound = 1.0 / (spacing * spacing);
    const double norm_sq_kernel = weighted_norm_sq(grid, g);
    if (norm_sq_kernel > norm_sq_bound * (1.0 + 1e-9)) {
      kernel.warnings.push_back(
          "influence kernel exceeds its spacing bound; results are suspect");
    }
  }
  return kernel;
}

std::vector<double> projected_scores(const CurveSample& sample,
                                     const CovKernel& cov,
                                     const ScoreKernel& kernel) {
  const Grid& grid = sample.grid();
  if (grid != cov.grid || grid != kernel.grid) {
    throw std::invalid_argument("projected scores need one shared grid");
  }
  const int p = grid.size();
  const std::vector<double>& w = grid.weights();
  double centering = 0.0;
  for (int a = 0; a < p; ++a) {
    const double* krow = kernel.matrix.row_ptr(a);
    const double* crow = cov.matrix.row_ptr(a);
    double acc = 0.0;
    for (int b = 0; b < p; ++b) acc += w[b] * krow[b] * crow[b];
    centering += w[a] * acc;
  }
  std::vector<double> scores(sample.size());
  std::vector<double> wx(p);
  for (int i = 0; i < sample.size(); ++i) {
    const std::vector<double>& x = sample.row(i);
    for (int b = 0; b < p; ++b) wx[b] = w[b] * x[b];
    double total = 0.0;
    for (int a = 0; a < p; ++a) {
      const double* krow = kernel.matrix.row_ptr(a);
      double acc = 0.0;
      for (int b = 0; b < p; ++b) acc += krow[b] * wx[b];
      total += wx[a] * acc;
    }
    scores[i] = total - centering;
  }
  return scores;
}

double hac_variance(const std::vector<double>& series, int bandwidth,
                    std::vector<std::string>* warnings) {
  const int n = static_cast<int>(series.size());
  if (bandwidth < 0) throw std::invalid_argument("bandwidth must be nonnegative");
  if (n <= 2 * bandwidth) {
    throw std::invalid_argument(
        "series too short for the bandwidth (need length > 2 * bandwidth)");
  }
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= n;
  std::vector<double> centered(n);
  for (int i = 0; i < n; ++i) centered[i] = series[i] - mean;
  double estimate = 0.0;
  for (int lag = 0; lag <= bandwidth; ++lag) {
    double gamma = 0.0;
    for (int i = 0; i + lag < n; ++i) gamma += centered[i] * centered[i + lag];
    gamma /= n;
    if (lag == 0) {
      estimate += gamma;
    } else {
      estimate += 2.0 * (1.0 - static_cast<double>(lag) / (bandwidth + 1)) * gamma;
    }
  }
  if (estimate < 0.0) {
    if (warnings) {
      warnings->push_back(
          "Bartlett estimate was negative and has been clipped to zero");
    }
    estimate = 0.0;
  }
  return estimate;
}

int default_truncation(const EigenSystem& system) {
  if (system.count() == 0) return 0;
  const double tau1 = system.eigenvalues[0];
  if (!(tau1 > 0.0)) return 0;
  int count = 0;
  for (int k = 0; k < system.count(); ++k) {
    if (system.eigenvalues[k] > 1e-6 * tau1) ++count;
  }
  return count;
}

LrvEstimate estimate_zeta(const CurveSample& x, const CurveSample& y, int j,
                          int K, int bandwidth) {
  if (x.grid() != y.grid()) {
    throw std::invalid_argument("samples must share a grid");
  }
  if (j < 1) throw std::invalid_argument("order j must be at least 1");
  const int m = x.size();
  const int n = y.size();

  LrvEstimate out;
  const CovKernel cov_x = estimate_cov(x);
  const CovKernel cov_y = estimate_cov(y);
  for (const auto* kern : {&cov_x, &cov_y}) {
    for (const std::string& w : kern->warnings) out.warnings.push_back(w);
  }

  // Probe decomposition to pick the default truncation (capped at 12
  // orders); then decompose both kernels at the working truncation.
  if (K == 0) {
    const int probe = std::min(x.grid().size(), 12);
    K = default_truncation(eigen_decompose(cov_x, probe));
  }
  if (K < j) {
    throw std::invalid_argument(
        "truncation K resolves below the tested order; pass K >= j");
  }
  out.truncation = K;
  const EigenSystem ex = eigen_decompose(cov_x, K);
  const EigenSystem ey = align_signs(ex, eigen_decompose(cov_y, K));

  const ScoreKernel fx = score_kernel(ex, ey, j, K);
  const ScoreKernel fy = score_kernel(ey, ex, j, K);
  for (const auto* kern : {&fx, &fy}) {
    for (const std::string& w : kern->warnings) out.warnings.push_back(w);
  }

  const auto cube_root_floor = [](int count) {
    return static_cast<int>(std::floor(std::cbrt(static_cast<double>(count)) + 1e-9));
  };
  const int bw_x = bandwidth > 0 ? bandwidth : cube_root_floor(m);
  const int bw_y = bandwidth > 0 ? bandwidth : cube_root_floor(n);
  out.bandwidth = bw_x;

  const std::vector<double> scores_x = projected_scores(x, cov_x, fx);
  const std::vector<double> scores_y = projected_scores(y, cov_y, fy);
  out.sigma2_x = hac_variance(scores_x, bw_x, &out.warnings);
  out.sigma2_y = hac_variance(scores_y, bw_y, &out.warnings);

  out.theta = static_cast<double>(m) / (m + n);
  out.zeta = 2.0 * std::sqrt(out.sigma2_x / out.theta +
                             out.sigma2_y / (1.0 - out.theta));
  return out;
}

TestResult test_lrv_plugin(const CurveSample& x, const CurveSample& y,
                           const RelevanceTestConfig& config,
                           const LrvEstimate& lrv) {
  if (config.j < 1) throw std::invalid_argument("order j must be at least 1");
  if (!(config.delta > 0.0)) {
    throw std::invalid_argument("relevance margin delta must be positive");
  }
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw std::invalid_argument("level alpha must lie strictly inside (0,1)");
  }
  TestResult result;
  result.kind = TestKind::lrv_plugin;
  result.j = config.j;
  result.delta = config.delta;
  result.alpha = config.alpha;
  result.m = x.size();
  result.n = y.size();
  result.d_hat = dhat_distance(x, y, config.j);
  result.v_hat = lrv.zeta;
  result.warnings = lrv.warnings;
  result.warnings.push_back(
      "diagnostic only: the plug-in long-run variance can be unreliable in "
      "small samples");
  result.q_alpha = normal_quantile(1.0 - config.alpha);
  if (lrv.zeta > 0.0) {
    result.w_hat = std::sqrt(static_cast<double>(result.m + result.n)) *
                   (result.d_hat - config.delta) / lrv.zeta;
    result.p_value = normal_upper_tail(result.w_hat);
    result.reject = result.w_hat > result.q_alpha;
  } else {
    result.w_hat = std::numeric_limits<double>::quiet_NaN();
    result.p_value = std::numeric_limits<double>::quiet_NaN();
    result.reject = false;
    result.warnings.push_back(
        "plug-in normalizer is zero; the test makes no decision");
  }
  return result;
}

}  // namespace eftest
