#pragma once

#include <string>
#include <vector>

#include "eftest/covariance.hpp"
#include "eftest/grid.hpp"
#include "eftest/selfnorm.hpp"

namespace eftest {

// Influence kernel f_j(s1,s2) of the leading-order eigenfunction distance
// with respect to one sample's covariance: the rank-one surface
//   f_j = -v_j (x) g,  g = sum_{k <= K, k != j} <v_k, v_j'> / (tau_j - tau_k) v_k,
// where v, tau come from `own` and v_j' from `other` (signs already
// aligned). Requires K eigenpairs and healthy spacing among the first K.
struct ScoreKernel {
  Grid grid;
  Matrix matrix;
  int truncation = 0;
  std::vector<std::string> warnings;

  ScoreKernel(Grid g, Matrix m) : grid(std::move(g)), matrix(std::move(m)) {}
};

ScoreKernel score_kernel(const EigenSystem& own, const EigenSystem& other,
                         int j, int K);

// Per-curve projections <(x_i (x) x_i) - C, f> under the double quadrature
// pairing. Sums to ~0 when C is the sample's own covariance.
std::vector<double> projected_scores(const CurveSample& sample,
                                     const CovKernel& cov,
                                     const ScoreKernel& kernel);

// Bartlett-kernel HAC long-run variance of a scalar series:
//   gamma_0 + 2 sum_{l<=bw} (1 - l/(bw+1)) gamma_l,
// autocovariances computed about the series mean. Requires
// length > 2 * bandwidth; a negative estimate clips to zero with a warning.
double hac_variance(const std::vector<double>& series, int bandwidth,
                    std::vector<std::string>* warnings = nullptr);

// Number of eigenvalues above 1e-6 times the leading one; the default
// truncation for estimate_zeta.
int default_truncation(const EigenSystem& system);

struct LrvEstimate {
  double sigma2_x = 0.0;
  double sigma2_y = 0.0;
  double theta = 0.5;  // m / (m + n)
  double zeta = 0.0;   // 2 sqrt(sigma2_x / theta + sigma2_y / (1 - theta))
  int truncation = 0;
  int bandwidth = 0;
  std::vector<std::string> warnings;
};

// Plug-in long-run variance of the normalized eigenfunction distance.
// K = 0 picks default_truncation; bandwidth = 0 picks floor(m^(1/3)).
// Samples must be centered.
LrvEstimate estimate_zeta(const CurveSample& x, const CurveSample& y, int j,
                          int K = 0, int bandwidth = 0);

// Diagnostic companion test: rejects when
//   sqrt(m+n) (D - delta) / zeta > u_{1-alpha}.
// The result always carries a warning that the plug-in normalizer can be
// unreliable; zeta = 0 yields no decision.
TestResult test_lrv_plugin(const CurveSample& x, const CurveSample& y,
                           const RelevanceTestConfig& config,
                           const LrvEstimate& lrv);

}  // namespace eftest
