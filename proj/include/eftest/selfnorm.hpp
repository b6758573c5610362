#pragma once

#include <string>
#include <vector>

#include "eftest/covariance.hpp"
#include "eftest/grid.hpp"
#include "eftest/nu_measure.hpp"
#include "eftest/null_law.hpp"

namespace eftest {

// Configuration for one relevance test: order j (1-based), relevance margin
// delta (> 0; squared-distance units for the eigenfunction test, squared
// eigenvalue-difference units for the eigenvalue test), level alpha, the
// weighting measure, and how many eigenpairs to track (j_max = 0 means j).
struct RelevanceTestConfig {
  int j = 1;
  double delta = 0.1;
  double alpha = 0.05;
  NuMeasure nu = NuMeasure::uniform();
  int j_max = 0;
};

enum class TestKind { eigenfunction, eigenvalue, lrv_plugin };

struct TestResult {
  TestKind kind = TestKind::eigenfunction;
  int j = 0;
  double delta = 0.0;
  double alpha = 0.0;
  int m = 0;
  int n = 0;
  double d_hat = 0.0;    // squared distance (or squared eigenvalue gap)
  double v_hat = 0.0;    // self-normalizer (zeta estimate for lrv_plugin)
  double w_hat = 0.0;    // normalized statistic
  double q_alpha = 0.0;  // critical value used
  double p_value = 1.0;
  bool reject = false;
  std::vector<std::string> warnings;
};

// Partial-sample eigensystems of both samples along the lambda grid with
// signs fixed: X(lambda) follows X(1) (path continuity), then Y(lambda)
// follows the aligned X(lambda). Systems are shared across orders, and
// distinct floor(m*lambda) values are decomposed once.
class EigenPath {
 public:
  EigenPath(const CurveSample& x, const CurveSample& y, const NuMeasure& nu,
            int j_max);

  int points() const { return static_cast<int>(lambdas_.size()); }
  double lambda(int idx) const { return lambdas_[idx]; }
  int j_max() const { return j_max_; }

  // ||vX_j(lambda) - vY_j(lambda)||^2 after alignment; 0 when either partial
  // sample is empty (the compared process is zero there).
  double diff_norm_sq(int idx, int j) const;
  bool empty_at(int idx) const { return empty_[idx]; }
  double tau_x(int idx, int j) const;
  double tau_y(int idx, int j) const;

  // Aligned eigenfunctions at a grid index (1-based j).
  std::vector<double> x_function(int idx, int j) const;
  std::vector<double> y_function(int idx, int j) const;

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::vector<double> lambdas_;
  int j_max_;
  std::vector<char> empty_;
  // One slot per distinct (kx, ky); lambda index -> slot.
  std::vector<int> slot_;
  std::vector<EigenSystem> x_sys_;  // aligned to X(1)
  std::vector<EigenSystem> y_sys_;  // aligned to X(lambda)
  std::vector<std::vector<double>> diff_nsq_;  // [slot][j-1]
  std::vector<std::string> warnings_;
};

// D(., lambda) = lambda (vX_j(., lambda) - vY_j(., lambda)) with the
// alignment conventions above. Zero curve when floor(m lambda) < 1 or
// floor(n lambda) < 1.
Curve dhat_process(const CurveSample& x, const CurveSample& y, int j,
                   double lambda);

// Squared quadrature distance between aligned leading-order eigenfunctions
// at lambda = 1; lies in [0, 2] up to rounding.
double dhat_distance(const CurveSample& x, const CurveSample& y, int j);

// Self-normalizer: sqrt of the nu-mean of
//   (lambda^2 ||diff(lambda)||^2 - lambda^2 D)^2.
double vhat(const CurveSample& x, const CurveSample& y, int j,
            const NuMeasure& nu);

// Marginal relevance test for the j-th eigenfunction: rejects when
// (D - delta) / V exceeds the table's 1-alpha quantile.
TestResult test_eigenfunction(const CurveSample& x, const CurveSample& y,
                              const RelevanceTestConfig& config,
                              const QuantileTable& table);

// Same machinery for several orders at once, reusing one eigensystem path.
// js and deltas must have equal size.
std::vector<TestResult> test_eigenfunction_family(
    const CurveSample& x, const CurveSample& y, const std::vector<int>& js,
    const std::vector<double>& deltas, double alpha, const NuMeasure& nu,
    const QuantileTable& table);

// Relevance test for the j-th eigenvalue, normalizing the squared weighted
// eigenvalue gap process the same way.
TestResult test_eigenvalue(const CurveSample& x, const CurveSample& y,
                           const RelevanceTestConfig& config,
                           const QuantileTable& table);

}  // namespace eftest
