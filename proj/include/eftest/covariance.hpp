#pragma once

#include <string>
#include <vector>

#include "eftest/grid.hpp"
#include "eftest/numerics.hpp"

namespace eftest {

// Empirical covariance kernel C(s,t) on a grid. `sample_fraction` is the
// lambda the kernel was built with and `effective_count` the number of
// leading curves actually averaged; effective_count == 0 means the zero
// kernel. The kernel is exactly symmetric by construction.
struct CovKernel {
  Grid grid;
  Matrix matrix;
  double sample_fraction = 1.0;
  int effective_count = 0;
  std::vector<std::string> warnings;

  CovKernel(Grid g, Matrix m) : grid(std::move(g)), matrix(std::move(m)) {}
};

// Leading eigenpairs of a covariance kernel under the quadrature geometry.
// Eigenvalues descend; eigenfunctions have unit quadrature norm and are
// quadrature-orthonormal. Signs are canonical: the entry of largest
// magnitude (first such index) is positive. j is 1-based in accessors.
struct EigenSystem {
  Grid grid;
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenfunctions;
  bool ill_separated = false;
  bool degenerate = false;
  std::vector<std::string> warnings;

  explicit EigenSystem(Grid g) : grid(std::move(g)) {}
  int count() const { return static_cast<int>(eigenvalues.size()); }
  double eigenvalue(int j) const { return eigenvalues[j - 1]; }
  const std::vector<double>& eigenfunction(int j) const {
    return eigenfunctions[j - 1];
  }
  Curve eigenfunction_curve(int j) const {
    return Curve(grid, eigenfunctions[j - 1]);
  }
};

// Uncentered average of x_i (x) x_i over the first floor(m * lambda) curves.
// lambda outside [0,1] is rejected; fewer than one curve yields the zero
// kernel. A sample whose pointwise mean is far from zero (relative to the
// kernel scale) gets a warning: the estimator expects centered data.
CovKernel estimate_cov_partial(const CurveSample& sample, double lambda);

// estimate_cov_partial at lambda = 1, bit for bit.
CovKernel estimate_cov(const CurveSample& sample);

// Top J eigenpairs via the symmetric quadrature-weighted problem
// W^(1/2) M W^(1/2), mapped back to curves. J must not exceed the grid size
// and the kernel must be finite.
EigenSystem eigen_decompose(const CovKernel& kernel, int J);

// Flips target eigenfunctions so each has nonnegative quadrature inner
// product with the reference of the same order; an exactly zero inner
// product leaves the function unchanged.
EigenSystem align_signs(const EigenSystem& reference, EigenSystem target);

// Eigensystem of the partial covariance using the first `used` curves.
// Equals eigen_decompose(estimate_cov_partial(...)) up to rounding but runs
// through the curve Gram matrix when used < grid size, which is much faster
// for short partial samples. Ranks beyond the kernel's span are filled with
// a deterministic orthonormal completion and flagged degenerate.
EigenSystem sample_eigensystem(const CurveSample& sample, int used, int J);

}  // namespace eftest
