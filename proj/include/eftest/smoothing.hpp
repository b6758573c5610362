#pragma once

#include <vector>

#include "eftest/grid.hpp"
#include "eftest/numerics.hpp"

namespace eftest {

enum class SmoothBasis { bspline, fourier };

struct RawPoint {
  double position;  // in [0,1]
  double value;
};

// Least-squares fit of scattered observations onto a smooth basis, evaluated
// on `grid`. For the cubic B-spline basis, basis_size counts equally spaced
// interior knots, giving basis_size + 4 basis functions (clamped knot
// vector). The Fourier basis uses the same function count so both fits have
// identical degrees of freedom: 1, then sin/cos pairs of increasing
// frequency. Requires at least basis_size + 4 points; a rank-deficient
// design (e.g. a raw gap spanning a knot's whole support) throws
// numeric_error naming the offending basis function.
Curve smooth_to_curve(const std::vector<RawPoint>& raw, int basis_size,
                      const Grid& grid,
                      SmoothBasis basis = SmoothBasis::bspline);

// Design matrix of the basis above at arbitrary positions; exposed for
// tests. Columns are basis functions.
Matrix smoothing_design(const std::vector<double>& positions, int basis_size,
                        SmoothBasis basis);

}  // namespace eftest
