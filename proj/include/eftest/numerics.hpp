#pragma once

#include <vector>

namespace eftest {

// Dense row-major matrix; the minimal surface the project needs.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        data_(static_cast<size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }
  double* row_ptr(int i) { return data_.data() + static_cast<size_t>(i) * cols_; }
  const double* row_ptr(int i) const {
    return data_.data() + static_cast<size_t>(i) * cols_;
  }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

 private:
  int rows_, cols_;
  std::vector<double> data_;
};

// Full spectrum of a real symmetric matrix, eigenvalues descending,
// eigenvector for values[j] in column j of vectors.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

// Householder tridiagonalization followed by implicit-shift QL with
// accumulated transforms. Deterministic; throws numeric_error if an
// eigenvalue fails to converge.
SymmetricEigen symmetric_eigen(const Matrix& a);

// Least squares min ||A x - b||_2 via Householder QR, A of size n x k with
// n >= k. Throws numeric_error naming the offending column when the design
// is rank deficient.
std::vector<double> qr_least_squares(const Matrix& a,
                                     const std::vector<double>& b);

// floor(total * fraction) with a 1e-9 guard, clamped to [0, total]: values
// like 0.29 are not exactly representable and naive flooring would drop an
// item. Shared by the partial covariance estimator and the Brownian path
// discretization so both sides of the test use one convention.
int partial_count(int total, double fraction);

// Standard normal quantile (AS241 rational approximation, ~1e-15 relative
// accuracy). p must lie strictly inside (0,1).
double normal_quantile(double p);

double normal_cdf(double x);

// 1 - Phi(x), accurate into the far upper tail.
double normal_upper_tail(double x);

}  // namespace eftest
