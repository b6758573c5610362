#include "eftest/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "eftest/errors.hpp"

namespace eftest {

namespace {

// Largest-magnitude entry positive (first such index): the canonical sign
// shared by every route that produces eigenfunctions.
void canonical_sign(std::vector<double>& v) {
  size_t arg = 0;
  double best = -1.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const double a = std::fabs(v[i]);
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  if (v[arg] < 0.0) {
    for (double& x : v) x = -x;
  }
}

void check_uncentered(const CurveSample& sample, int used, CovKernel& kernel) {
  if (used < 1) return;
  const int p = sample.grid().size();
  std::vector<double> mean(p, 0.0);
  for (int i = 0; i < used; ++i) {
    const std::vector<double>& row = sample.row(i);
    for (int k = 0; k < p; ++k) mean[k] += row[k];
  }
  double max_mean = 0.0;
  for (double v : mean) max_mean = std::max(max_mean, std::fabs(v) / used);
  double max_diag = 0.0;
  for (int k = 0; k < p; ++k) max_diag = std::max(max_diag, kernel.matrix(k, k));
  if (max_mean > 1e-8 * std::sqrt(std::max(max_diag, 0.0))) {
    kernel.warnings.push_back(
        "sample does not appear centered; the covariance estimator assumes "
        "mean zero");
  }
}

// Deterministic orthonormal completion under the quadrature geometry: scaled
// canonical basis vectors, Gram-Schmidt against everything accepted so far.
std::vector<double> complete_direction(
    const Grid& grid, const std::vector<std::vector<double>>& existing) {
  const int p = grid.size();
  for (int cand = 0; cand < p; ++cand) {
    std::vector<double> v(p, 0.0);
    v[cand] = 1.0 / std::sqrt(grid.weight(cand));
    for (const auto& u : existing) {
      const double proj = weighted_dot(grid, u, v);
      for (int k = 0; k < p; ++k) v[k] -= proj * u[k];
    }
    const double nsq = weighted_norm_sq(grid, v);
    if (nsq > 0.25) {
      const double inv = 1.0 / std::sqrt(nsq);
      for (double& x : v) x *= inv;
      canonical_sign(v);
      return v;
    }
  }
  throw numeric_error("orthonormal completion failed");
}

void flag_spectrum(EigenSystem& sys, const std::vector<double>& full_spectrum,
                   int J) {
  const double tau1 = full_spectrum.empty() ? 0.0 : full_spectrum[0];
  bool ill = false;
  for (int j = 0; j < J; ++j) {
    const double next = j + 1 < static_cast<int>(full_spectrum.size())
                            ? full_spectrum[j + 1]
                            : 0.0;
    const double cur = j < static_cast<int>(full_spectrum.size())
                           ? full_spectrum[j]
                           : 0.0;
    if (tau1 > 0.0 && cur - next < 1e-10 * tau1) ill = true;
  }
  if (ill) {
    sys.ill_separated = true;
    sys.warnings.push_back(
        "ill-separated eigenvalues: adjacent gap below 1e-10 of the leading "
        "eigenvalue");
  }
  const double tauJ = J - 1 < static_cast<int>(full_spectrum.size())
                          ? full_spectrum[J - 1]
                          : 0.0;
  if (tau1 <= 0.0 || tauJ <= 1e-14 * tau1) {
    sys.degenerate = true;
    sys.warnings.push_back(
        "degenerate spectrum at the requested order; eigenfunctions beyond "
        "the kernel rank are an arbitrary orthonormal set");
  }
}

CovKernel kernel_from_prefix(const CurveSample& sample, int used,
                             double fraction) {
  const Grid& grid = sample.grid();
  const int p = grid.size();
  CovKernel kernel(grid, Matrix(p, p, 0.0));
  kernel.sample_fraction = fraction;
  kernel.effective_count = used;
  if (used < 1) return kernel;
  Matrix& m = kernel.matrix;
  for (int i = 0; i < used; ++i) {
    const double* x = sample.row(i).data();
    for (int a = 0; a < p; ++a) {
      double* row = m.row_ptr(a);
      const double xa = x[a];
      for (int b = a; b < p; ++b) row[b] += xa * x[b];
    }
  }
  const double inv = 1.0 / used;
  for (int a = 0; a < p; ++a) {
    for (int b = a; b < p; ++b) {
      m(a, b) *= inv;
      m(b, a) = m(a, b);
    }
  }
  check_uncentered(sample, used, kernel);
  return kernel;
}

}  // namespace

CovKernel estimate_cov_partial(const CurveSample& sample, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("sample fraction must lie in [0,1]");
  }
  return kernel_from_prefix(sample, partial_count(sample.size(), lambda), lambda);
}

CovKernel estimate_cov(const CurveSample& sample) {
  return estimate_cov_partial(sample, 1.0);
}

EigenSystem eigen_decompose(const CovKernel& kernel, int J) {
  const Grid& grid = kernel.grid;
  const int p = grid.size();
  if (J < 1 || J > p) {
    throw std::invalid_argument("eigenpair count must lie in [1, grid size]");
  }
  double max_abs = 0.0;
  for (double v : kernel.matrix.data()) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("covariance kernel has non-finite entries");
    }
    max_abs = std::max(max_abs, std::fabs(v));
  }
  double max_asym = 0.0;
  for (int a = 0; a < p; ++a) {
    for (int b = a + 1; b < p; ++b) {
      max_asym = std::max(max_asym,
                          std::fabs(kernel.matrix(a, b) - kernel.matrix(b, a)));
    }
  }
  if (max_asym > 1e-10 * (1.0 + max_abs)) {
    throw std::invalid_argument("covariance kernel is not symmetric");
  }

  std::vector<double> sw(p);
  for (int k = 0; k < p; ++k) sw[k] = std::sqrt(grid.weight(k));
  Matrix a(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) a(i, j) = sw[i] * kernel.matrix(i, j) * sw[j];
  }
  const SymmetricEigen eig = symmetric_eigen(a);

  EigenSystem sys(grid);
  sys.eigenvalues.assign(eig.values.begin(), eig.values.begin() + J);
  sys.eigenfunctions.resize(J);
  for (int j = 0; j < J; ++j) {
    std::vector<double> v(p);
    for (int k = 0; k < p; ++k) v[k] = eig.vectors(k, j) / sw[k];
    const double nsq = weighted_norm_sq(grid, v);
    if (nsq > 0.0) {
      const double inv = 1.0 / std::sqrt(nsq);
      for (double& x : v) x *= inv;
    }
    canonical_sign(v);
    sys.eigenfunctions[j] = std::move(v);
  }
  flag_spectrum(sys, eig.values, J);
  return sys;
}

EigenSystem align_signs(const EigenSystem& reference, EigenSystem target) {
  if (reference.grid != target.grid) {
    throw std::invalid_argument("sign alignment needs a shared grid");
  }
  const int count = std::min(reference.count(), target.count());
  for (int j = 0; j < count; ++j) {
    const double ip = weighted_dot(target.grid, reference.eigenfunctions[j],
                                   target.eigenfunctions[j]);
    if (ip < 0.0) {
      for (double& x : target.eigenfunctions[j]) x = -x;
    }
  }
  return target;
}

EigenSystem sample_eigensystem(const CurveSample& sample, int used, int J) {
  const Grid& grid = sample.grid();
  const int p = grid.size();
  const int m = sample.size();
  if (used < 0 || used > m) {
    throw std::invalid_argument("used curve count must lie in [0, sample size]");
  }
  if (J < 1 || J > p) {
    throw std::invalid_argument("eigenpair count must lie in [1, grid size]");
  }
  if (used >= p) {
    return eigen_decompose(kernel_from_prefix(sample, used,
                                              static_cast<double>(used) / m),
                           J);
  }

  EigenSystem sys(grid);
  sys.eigenvalues.assign(J, 0.0);
  sys.eigenfunctions.resize(J);

  std::vector<double> full_spectrum;
  int rank = 0;
  if (used >= 1) {
    // Gram route: the k x k matrix (1/k) <x_i, x_j>_w shares the kernel
    // operator's nonzero spectrum; eigenvector u of eigenvalue tau maps to
    // the eigenfunction sum_i u_i x_i / sqrt(k tau).
    Matrix gram(used, used);
    for (int i = 0; i < used; ++i) {
      for (int j = i; j < used; ++j) {
        const double g = weighted_dot(grid, sample.row(i), sample.row(j)) / used;
        gram(i, j) = g;
        gram(j, i) = g;
      }
    }
    const SymmetricEigen eig = symmetric_eigen(gram);
    full_spectrum = eig.values;
    const double tau1 = eig.values[0];
    const double rank_tol = 1e-12 * std::max(tau1, 0.0);
    for (int j = 0; j < std::min(J, used); ++j) {
      const double tau = eig.values[j];
      if (tau <= rank_tol) break;
      std::vector<double> v(p, 0.0);
      const double inv = 1.0 / std::sqrt(static_cast<double>(used) * tau);
      for (int i = 0; i < used; ++i) {
        const double c = eig.vectors(i, j) * inv;
        const double* x = sample.row(i).data();
        for (int k = 0; k < p; ++k) v[k] += c * x[k];
      }
      const double nsq = weighted_norm_sq(grid, v);
      if (nsq > 0.0) {
        const double s = 1.0 / std::sqrt(nsq);
        for (double& x : v) x *= s;
      }
      canonical_sign(v);
      sys.eigenvalues[j] = tau;
      sys.eigenfunctions[j] = std::move(v);
      rank = j + 1;
    }
  }
  for (int j = rank; j < J; ++j) {
    std::vector<std::vector<double>> existing(sys.eigenfunctions.begin(),
                                              sys.eigenfunctions.begin() + j);
    sys.eigenfunctions[j] = complete_direction(grid, existing);
    sys.eigenvalues[j] = 0.0;
  }
  flag_spectrum(sys, full_spectrum, J);
  return sys;
}

}  // namespace eftest
