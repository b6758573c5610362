#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "eftest/covariance.hpp"
#include "eftest/errors.hpp"
#include "eftest/grid.hpp"
#include "eftest/longrun.hpp"
#include "eftest/rng.hpp"
#include "eftest/selfnorm.hpp"
#include "helpers.hpp"

using namespace eftest;
namespace tt = eftest::testing;

namespace {

// Orthonormal trig system on a uniform grid: frequencies 1..4, sin/cos pairs;
// `phase` shifts the first pair. comp is 0-based, < 8.
std::vector<double> trig8(const Grid& g, int comp, double phase) {
  std::vector<double> v(g.size());
  const double s2 = std::sqrt(2.0);
  const int freq = comp / 2 + 1;
  const bool is_sin = comp % 2 == 0;
  const double ph = freq == 1 ? phase : 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const double arg = 2.0 * M_PI * freq * g.point(i) + ph;
    v[i] = s2 * (is_sin ? std::sin(arg) : std::cos(arg));
  }
  return v;
}

CurveSample span_sample(const Grid& g, int m, const std::vector<double>& tau,
                        double phase, std::uint64_t seed,
                        std::uint64_t stream) {
  std::vector<std::vector<double>> basis;
  for (size_t j = 0; j < tau.size(); ++j) {
    basis.push_back(trig8(g, static_cast<int>(j), phase));
  }
  RngStream rng(seed, stream);
  std::vector<std::vector<double>> rows(m, std::vector<double>(g.size(), 0.0));
  for (int i = 0; i < m; ++i) {
    for (size_t j = 0; j < tau.size(); ++j) {
      const double c = std::sqrt(tau[j]) * rng.next_normal();
      for (int k = 0; k < g.size(); ++k) rows[i][k] += c * basis[j][k];
    }
  }
  return CurveSample(g, std::move(rows));
}

double max_abs_entry(const Matrix& m) {
  double v = 0.0;
  for (double x : m.data()) v = std::max(v, std::abs(x));
  return v;
}

}  // namespace

TEST_CASE("identical eigensystems give a vanishing influence kernel") {
  const Grid g(32);
  const CurveSample s = tt::random_sample(g, 30, 12u, 0);
  const EigenSystem e = eigen_decompose(estimate_cov(center(s)), 4);
  const ScoreKernel f = score_kernel(e, e, 2, 4);
  CHECK(max_abs_entry(f.matrix) <= 1e-9);
  CHECK(f.truncation == 4);
}

TEST_CASE("influence kernel argument validation") {
  const Grid g(32);
  const CurveSample s = tt::random_sample(g, 20, 13u, 0);
  const EigenSystem e = eigen_decompose(estimate_cov(center(s)), 4);
  CHECK_THROWS_AS(score_kernel(e, e, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(score_kernel(e, e, 5, 4), std::invalid_argument);
  CHECK_THROWS_AS(score_kernel(e, e, 1, 5), std::invalid_argument);
}

TEST_CASE("near-ties inside the truncation are a hard error") {
  const Grid g(64);
  const std::vector<double> a = trig8(g, 0, 0.0);
  const std::vector<double> b = trig8(g, 1, 0.0);
  auto two_curve = [&](double s2sq) {
    const double s2 = std::sqrt(s2sq);
    std::vector<double> up(g.size()), dn(g.size());
    for (int k = 0; k < g.size(); ++k) {
      up[k] = a[k] + s2 * b[k];
      dn[k] = a[k] - s2 * b[k];
    }
    return CurveSample(g, {up, dn});
  };
  // spectrum exactly {1, s2sq}
  const EigenSystem tied =
      eigen_decompose(estimate_cov(two_curve(1.0 - 1e-12)), 2);
  CHECK_THROWS_AS(score_kernel(tied, tied, 1, 2), numeric_error);

  // spacing between the hard floor and the sensitivity threshold: warn only
  const EigenSystem close =
      eigen_decompose(estimate_cov(two_curve(1.0 - 1e-8)), 2);
  const ScoreKernel f = score_kernel(close, close, 1, 2);
  bool warned = false;
  for (const std::string& w : f.warnings) {
    if (w.find("spacing") != std::string::npos) warned = true;
  }
  CHECK(warned);
}

TEST_CASE("hac variance closed forms") {
  CHECK(hac_variance({3.0, 3.0, 3.0, 3.0, 3.0}, 2) == 0.0);
  CHECK(hac_variance({1.0, 2.0, 3.0, 4.0}, 0) ==
        doctest::Approx(1.25).epsilon(1e-15));
  CHECK(hac_variance({1.0, 2.0, 3.0, 4.0}, 1) ==
        doctest::Approx(1.5625).epsilon(1e-14));
  CHECK_THROWS_AS(hac_variance({1.0, 2.0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(hac_variance({1.0, 2.0, 3.0}, -1), std::invalid_argument);
  CHECK_NOTHROW(hac_variance({1.0, 2.0, 3.0}, 1));
}

TEST_CASE("hac recovers the long-run variance of an ar(1) series") {
  const double rho = 0.5;
  const int n = 10000;
  RngStream rng(404u, 0);
  std::vector<double> series(n);
  double state = 0.0;
  for (int i = 0; i < n + 50; ++i) {
    state = rho * state + std::sqrt(1.0 - rho * rho) * rng.next_normal();
    if (i >= 50) series[i - 50] = state;
  }
  // long-run variance (1+rho)/(1-rho) = 3
  const double est = hac_variance(series, 30);
  CHECK(std::abs(est - 3.0) <= 0.6);
}

TEST_CASE("projected scores of the own covariance sum to zero") {
  const Grid g(32);
  const CurveSample raw = tt::random_sample(g, 40, 17u, 0);
  const CurveSample s = center(raw);
  const CovKernel cov = estimate_cov(s);
  const EigenSystem ex = eigen_decompose(cov, 4);
  const CurveSample other = center(tt::random_sample(g, 40, 18u, 0));
  const EigenSystem ey = align_signs(ex, eigen_decompose(estimate_cov(other), 4));
  const ScoreKernel f = score_kernel(ex, ey, 1, 4);
  const std::vector<double> scores = projected_scores(s, cov, f);
  REQUIRE(static_cast<int>(scores.size()) == s.size());
  double total = 0.0, mag = 0.0;
  for (double v : scores) {
    total += v;
    mag += std::abs(v);
  }
  CHECK(std::abs(total) <= 1e-9 * (mag + 1.0));

  const CovKernel wrong_grid = estimate_cov(tt::random_sample(Grid(33), 5, 1u));
  CHECK_THROWS_AS(projected_scores(s, wrong_grid, f), std::invalid_argument);
}

TEST_CASE("plug-in normalizer matches the population value for iid data") {
  const Grid g(64);
  const std::vector<double> tau = {8.0, 4.0, 0.5, 0.3};
  const double shift = 0.5;
  const int m = 10000;
  const CurveSample x = center(span_sample(g, m, tau, 0.0, 71u, 0));
  const CurveSample y = center(span_sample(g, m, tau, shift, 71u, 1));

  const LrvEstimate lrv = estimate_zeta(x, y, 1, 0, 2);
  CHECK(lrv.truncation == 4);  // default truncation resolves the 4 components
  CHECK(lrv.theta == 0.5);

  // sigma^2 = tau1 tau2 sin^2(shift) / (tau1 - tau2)^2 on each side, so
  // zeta = 4 sigma for equal sizes.
  const double sigma2 = tau[0] * tau[1] * std::sin(shift) * std::sin(shift) /
                        ((tau[0] - tau[1]) * (tau[0] - tau[1]));
  const double zeta_pop = 4.0 * std::sqrt(sigma2);
  CHECK(std::abs(lrv.sigma2_x - sigma2) <= 0.10 * sigma2);
  CHECK(std::abs(lrv.sigma2_y - sigma2) <= 0.10 * sigma2);
  CHECK(std::abs(lrv.zeta - zeta_pop) <= 0.10 * zeta_pop);

  // internal consistency of the combination
  const double recombined = 2.0 * std::sqrt(lrv.sigma2_x / lrv.theta +
                                            lrv.sigma2_y / (1.0 - lrv.theta));
  CHECK(lrv.zeta == recombined);
}

TEST_CASE("truncation choice is insensitive for a resolved spectrum") {
  const Grid g(64);
  const std::vector<double> tau = {8.0, 4.0, 2.0, 1.0, 0.5, 0.25, 0.12, 0.06};
  const CurveSample x = center(span_sample(g, 500, tau, 0.0, 81u, 0));
  const CurveSample y = center(span_sample(g, 500, tau, 0.8, 81u, 1));
  const LrvEstimate k4 = estimate_zeta(x, y, 1, 4, 3);
  const LrvEstimate k8 = estimate_zeta(x, y, 1, 8, 3);
  REQUIRE(k4.zeta > 0.0);
  CHECK(std::abs(k4.zeta - k8.zeta) <= 0.10 * k4.zeta);
}

TEST_CASE("default truncation counts the resolved eigenvalues") {
  EigenSystem e{Grid(16)};
  e.eigenvalues = {8.0, 4.0, 0.5, 0.3, 1e-9, 0.0};
  CHECK(default_truncation(e) == 4);
  e.eigenvalues = {0.0, 0.0};
  CHECK(default_truncation(e) == 0);
  e.eigenvalues = {5.0};
  CHECK(default_truncation(e) == 1);
}

TEST_CASE("estimate_zeta input validation and warning propagation") {
  const Grid g(32);
  const CurveSample x = center(tt::random_sample(g, 30, 19u, 0));
  const CurveSample y = center(tt::random_sample(g, 30, 20u, 0));
  CHECK_THROWS_AS(estimate_zeta(x, y, 0), std::invalid_argument);
  CHECK_THROWS_AS(estimate_zeta(x, y, 5, 3), std::invalid_argument);
  const CurveSample z = tt::random_sample(Grid(33), 30, 21u, 0);
  CHECK_THROWS_AS(estimate_zeta(x, z, 1), std::invalid_argument);
  // bandwidth too large for the sample length
  CHECK_THROWS_AS(estimate_zeta(x, y, 1, 4, 15), std::invalid_argument);

  // uncentered data is flagged, not rejected
  std::vector<std::vector<double>> shifted = x.rows();
  for (auto& row : shifted) {
    for (double& v : row) v += 5.0;
  }
  const LrvEstimate lrv = estimate_zeta(CurveSample(g, shifted), y, 1, 4, 2);
  bool warned = false;
  for (const std::string& w : lrv.warnings) {
    if (w.find("centered") != std::string::npos) warned = true;
  }
  CHECK(warned);
}

TEST_CASE("plug-in test statistic behaves like a z statistic") {
  const Grid g(32);
  const CurveSample x = center(tt::random_sample(g, 60, 23u, 0));
  const CurveSample y = center(tt::random_sample(g, 60, 24u, 0));
  const LrvEstimate lrv = estimate_zeta(x, y, 1, 4, 2);
  REQUIRE(lrv.zeta > 0.0);

  RelevanceTestConfig c;
  c.delta = dhat_distance(x, y, 1);
  REQUIRE(c.delta > 0.0);
  const TestResult centered = test_lrv_plugin(x, y, c, lrv);
  CHECK(centered.kind == TestKind::lrv_plugin);
  CHECK(centered.w_hat == 0.0);
  CHECK(centered.p_value == 0.5);
  CHECK_FALSE(centered.reject);
  CHECK(centered.v_hat == lrv.zeta);
  CHECK(centered.q_alpha == normal_quantile(0.95));
  bool diagnostic = false;
  for (const std::string& w : centered.warnings) {
    if (w.find("diagnostic") != std::string::npos) diagnostic = true;
  }
  CHECK(diagnostic);

  // doubling zeta halves the statistic exactly
  c.delta = 0.01;
  const TestResult base = test_lrv_plugin(x, y, c, lrv);
  LrvEstimate doubled = lrv;
  doubled.zeta = 2.0 * lrv.zeta;
  const TestResult half = test_lrv_plugin(x, y, c, doubled);
  CHECK(half.w_hat == base.w_hat / 2.0);

  // larger margins push the statistic down
  c.delta = 0.5;
  const TestResult wide = test_lrv_plugin(x, y, c, lrv);
  CHECK(wide.w_hat < base.w_hat);

  // zero normalizer: no decision
  LrvEstimate zero = lrv;
  zero.zeta = 0.0;
  const TestResult none = test_lrv_plugin(x, y, c, zero);
  CHECK(std::isnan(none.w_hat));
  CHECK(std::isnan(none.p_value));
  CHECK_FALSE(none.reject);
  bool nodecision = false;
  for (const std::string& w : none.warnings) {
    if (w.find("no decision") != std::string::npos) nodecision = true;
  }
  CHECK(nodecision);
}
