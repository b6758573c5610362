#include "eftest/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "eftest/errors.hpp"

namespace eftest {

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form with the
// orthogonal transform accumulated in place (EISPACC tred2 lineage).
// On exit: z holds Q, d the diagonal, e the subdiagonal in e[1..n-1].
void tridiagonalize(Matrix& z, std::vector<double>& d, std::vector<double>& e) {
  const int n = z.rows();
  for (int i = n - 1; i > 0; --i) {
    const int l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::fabs(z(i, k));
      if (scale == 0.0) {
        e[i] = z(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          z(i, k) /= scale;
          h += z(i, k) * z(i, k);
        }
        double f = z(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        z(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          z(j, i) = z(i, j) / h;
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
          for (int k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
          e[j] = g / h;
          f += e[j] * z(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = z(i, j);
          e[j] = g = e[j] - hh * f;
          for (int k = 0; k <= j; ++k) z(j, k) -= f * e[k] + g * z(i, k);
        }
      }
    } else {
      e[i] = z(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    const int l = i - 1;
    if (d[i] != 0.0) {
      for (int j = 0; j <= l; ++j) {
        double g = 0.0;
        for (int k = 0; k <= l; ++k) g += z(i, k) * z(k, j);
        for (int k = 0; k <= l; ++k) z(k, j) -= g * z(k, i);
      }
    }
    d[i] = z(i, i);
    z(i, i) = 1.0;
    for (int j = 0; j <= l; ++j) z(j, i) = z(i, j) = 0.0;
  }
}

// Implicit-shift QL on the tridiagonal (d, e) with rotations accumulated
// into the columns of z. Eigenvalues land in d, unordered.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, Matrix& z) {
  const int n = static_cast<int>(d.size());
  const double eps = std::numeric_limits<double>::epsilon();
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 50) throw numeric_error("eigensolver failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          e[i + 1] = r = std::hypot(f, g);
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          d[i + 1] = g + (p = s * r);
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

SymmetricEigen symmetric_eigen(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix must be square");
  const int n = a.rows();
  if (n == 0) return {};
  SymmetricEigen out;
  Matrix z = a;
  std::vector<double> d(n, 0.0), e(n, 0.0);
  if (n == 1) {
    d[0] = a(0, 0);
    z(0, 0) = 1.0;
  } else {
    tridiagonalize(z, d, e);
    ql_implicit(d, e, z);
  }
  // Sort eigenpairs by descending eigenvalue; stable so equal values keep
  // their column order, which makes degenerate spectra deterministic.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return d[i] > d[j]; });
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    for (int i = 0; i < n; ++i) out.vectors(i, j) = z(i, order[j]);
  }
  return out;
}

std::vector<double> qr_least_squares(const Matrix& a, const std::vector<double>& b) {
  const int n = a.rows(), k = a.cols();
  if (static_cast<int>(b.size()) != n) {
    throw std::invalid_argument("right-hand side length must match row count");
  }
  if (n < k) throw std::invalid_argument("least squares needs rows >= columns");
  Matrix r = a;
  std::vector<double> rhs = b;
  double scale = 0.0;
  for (int j = 0; j < k; ++j) {
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += r(i, j) * r(i, j);
    scale = std::max(scale, std::sqrt(norm));
  }
  const double rank_tol = 1e-12 * scale;
  std::vector<double> v(n);
  for (int j = 0; j < k; ++j) {
    double sigma = 0.0;
    for (int i = j; i < n; ++i) sigma += r(i, j) * r(i, j);
    sigma = std::sqrt(sigma);
    if (sigma <= rank_tol) {
      throw numeric_error("design matrix is rank deficient: basis function " +
                          std::to_string(j + 1) +
                          " is not identified by the data");
    }
    const double alpha = r(j, j) >= 0.0 ? -sigma : sigma;
    double vnorm_sq = 0.0;
    for (int i = j; i < n; ++i) {
      v[i] = r(i, j);
      if (i == j) v[i] -= alpha;
      vnorm_sq += v[i] * v[i];
    }
    if (vnorm_sq > 0.0) {
      const double beta = 2.0 / vnorm_sq;
      for (int c = j; c < k; ++c) {
        double dot = 0.0;
        for (int i = j; i < n; ++i) dot += v[i] * r(i, c);
        dot *= beta;
        for (int i = j; i < n; ++i) r(i, c) -= dot * v[i];
      }
      double dot = 0.0;
      for (int i = j; i < n; ++i) dot += v[i] * rhs[i];
      dot *= beta;
      for (int i = j; i < n; ++i) rhs[i] -= dot * v[i];
    }
    r(j, j) = alpha;
  }
  std::vector<double> x(k, 0.0);
  for (int j = k - 1; j >= 0; --j) {
    double acc = rhs[j];
    for (int c = j + 1; c < k; ++c) acc -= r(j, c) * x[c];
    x[j] = acc / r(j, j);
  }
  return x;
}

int partial_count(int total, double fraction) {
  int k = static_cast<int>(std::floor(total * fraction + 1e-9));
  if (k < 0) k = 0;
  if (k > total) k = total;
  return k;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile needs p strictly inside (0,1)");
  }
  // AS241 (PPND16): rational approximations on three regions.
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        q * (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                   6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                 1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
               1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
    const double den =
        (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
              3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
            5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
          4.2313330701600911252e+1) * r + 1.0);
    return num / den;
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
            3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    value = num / den;
  }
  return q < 0.0 ? -value : value;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace eftest
