#pragma once

#include <memory>
#include <string>
#include <vector>

namespace eftest {

// Uniform grid on [0,1] with trapezoid quadrature weights. Weights sum to 1
// exactly up to rounding: h/2 at the ends, h inside, h = 1/(P-1). Copies are
// cheap (shared immutable payload); two grids are equal iff they have the
// same point count.
class Grid {
 public:
  explicit Grid(int points);

  int size() const { return static_cast<int>(data_->pts.size()); }
  double point(int i) const { return data_->pts[i]; }
  double weight(int i) const { return data_->w[i]; }
  const std::vector<double>& points() const { return data_->pts; }
  const std::vector<double>& weights() const { return data_->w; }

  bool operator==(const Grid& other) const { return size() == other.size(); }
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  struct Payload {
    std::vector<double> pts;
    std::vector<double> w;
  };
  std::shared_ptr<const Payload> data_;
};

// One observed function: finite values on every grid point.
struct Curve {
  Curve(Grid g, std::vector<double> v);

  Grid grid;
  std::vector<double> values;
};

// Time-ordered sample of curves on one shared grid, stored row-per-curve.
// At least two curves; all values finite.
class CurveSample {
 public:
  CurveSample(Grid g, std::vector<std::vector<double>> rows,
              std::string label = "");

  int size() const { return static_cast<int>(rows_.size()); }
  const Grid& grid() const { return grid_; }
  const std::vector<double>& row(int i) const { return rows_[i]; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  Curve curve(int i) const { return Curve(grid_, rows_[i]); }
  const std::string& label() const { return label_; }

 private:
  Grid grid_;
  std::vector<std::vector<double>> rows_;
  std::string label_;
};

// Quadrature inner product; both curves must live on the same grid.
double inner_product(const Curve& f, const Curve& g);
double norm_sq(const Curve& f);

// Same inner product over raw value vectors sharing grid g.
double weighted_dot(const Grid& g, const std::vector<double>& a,
                    const std::vector<double>& b);
double weighted_norm_sq(const Grid& g, const std::vector<double>& a);

std::vector<double> pointwise_mean(const CurveSample& sample);

// Subtracts the pointwise mean curve. A no-op when the mean is already at
// rounding level, which makes the operation exactly idempotent.
CurveSample center(const CurveSample& sample);

}  // namespace eftest
