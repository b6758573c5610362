#include "eftest/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "eftest/errors.hpp"

namespace eftest {

namespace {

// Clamped cubic knot vector with B equally spaced interior knots:
// 0,0,0,0, 1/(B+1), ..., B/(B+1), 1,1,1,1.
std::vector<double> clamped_knots(int interior) {
  std::vector<double> t(interior + 8);
  for (int i = 0; i < 4; ++i) t[i] = 0.0;
  for (int i = 1; i <= interior; ++i) t[3 + i] = static_cast<double>(i) / (interior + 1);
  for (int i = 0; i < 4; ++i) t[interior + 4 + i] = 1.0;
  return t;
}

// Index k with t[k] <= x < t[k+1], x = 1 mapping to the last true span.
int find_span(const std::vector<double>& t, int nbasis, double x) {
  if (x >= 1.0) return nbasis - 1;
  int lo = 3, hi = nbasis;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (x < t[mid]) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

// The four cubic B-spline basis values that are nonzero on span k
// (Cox-de Boor, bottom-up triangular recurrence).
void basis_at(const std::vector<double>& t, int span, double x, double out[4]) {
  out[0] = 1.0;
  double left[4], right[4];
  for (int degree = 1; degree <= 3; ++degree) {
    left[degree] = x - t[span + 1 - degree];
    right[degree] = t[span + degree] - x;
    double saved = 0.0;
    for (int r = 0; r < degree; ++r) {
      const double den = right[r + 1] + left[degree - r];
      const double temp = den != 0.0 ? out[r] / den : 0.0;
      out[r] = saved + right[r + 1] * temp;
      saved = left[degree - r] * temp;
    }
    out[degree] = saved;
  }
}

}  // namespace

Matrix smoothing_design(const std::vector<double>& positions, int basis_size,
                        SmoothBasis basis) {
  if (basis_size < 1) throw std::invalid_argument("basis size must be positive");
  const int nbasis = basis_size + 4;
  const int n = static_cast<int>(positions.size());
  for (double x : positions) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw std::invalid_argument("positions must lie in [0,1]");
    }
  }
  Matrix design(n, nbasis, 0.0);
  if (basis == SmoothBasis::bspline) {
    const std::vector<double> knots = clamped_knots(basis_size);
    for (int i = 0; i < n; ++i) {
      const int span = find_span(knots, nbasis, positions[i]);
      double values[4];
      basis_at(knots, span, positions[i], values);
      for (int r = 0; r < 4; ++r) design(i, span - 3 + r) = values[r];
    }
  } else {
    const double two_pi = 2.0 * std::numbers::pi;
    const double amp = std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
      design(i, 0) = 1.0;
      for (int c = 1; c < nbasis; ++c) {
        const int harmonic = (c + 1) / 2;
        const double arg = two_pi * harmonic * positions[i];
        design(i, c) = amp * ((c % 2) == 1 ? std::sin(arg) : std::cos(arg));
      }
    }
  }
  return design;
}

Curve smooth_to_curve(const std::vector<RawPoint>& raw, int basis_size,
                      const Grid& grid, SmoothBasis basis) {
  if (basis_size < 1) throw std::invalid_argument("basis size must be positive");
  const int nbasis = basis_size + 4;
  if (static_cast<int>(raw.size()) < nbasis) {
    throw std::invalid_argument(
        "smoothing needs at least basis_size + 4 raw points");
  }
  std::vector<double> positions(raw.size()), values(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i].position) || !std::isfinite(raw[i].value)) {
      throw std::invalid_argument("raw points must be finite");
    }
    positions[i] = raw[i].position;
    values[i] = raw[i].value;
  }
  const Matrix design = smoothing_design(positions, basis_size, basis);
  const std::vector<double> coef = qr_least_squares(design, values);
  const Matrix eval = smoothing_design(grid.points(), basis_size, basis);
  std::vector<double> fitted(grid.size(), 0.0);
  for (int i = 0; i < grid.size(); ++i) {
    double acc = 0.0;
    for (int c = 0; c < nbasis; ++c) acc += eval(i, c) * coef[c];
    fitted[i] = acc;
  }
  return Curve(grid, std::move(fitted));
}

}  // namespace eftest
