#include "eftest/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace eftest {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

void require_finite(const std::vector<double>& values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) + " contains a non-finite value");
    }
  }
}

}  // namespace

Grid::Grid(int points) {
  require(points >= 16, "grid needs at least 16 points");
  auto payload = std::make_shared<Payload>();
  payload->pts.resize(points);
  payload->w.resize(points);
  const double h = 1.0 / (points - 1);
  for (int i = 0; i < points; ++i) payload->pts[i] = i * h;
  payload->pts.back() = 1.0;
  for (int i = 0; i < points; ++i) payload->w[i] = h;
  payload->w.front() = h / 2.0;
  payload->w.back() = h / 2.0;
  data_ = std::move(payload);
}

Curve::Curve(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  require(static_cast<int>(values.size()) == grid.size(),
          "curve length must match its grid");
  require_finite(values, "curve");
}

CurveSample::CurveSample(Grid g, std::vector<std::vector<double>> rows,
                         std::string label)
    : grid_(std::move(g)), rows_(std::move(rows)), label_(std::move(label)) {
  require(rows_.size() >= 2, "curve sample needs at least 2 curves");
  for (const auto& row : rows_) {
    require(static_cast<int>(row.size()) == grid_.size(),
            "every curve must match the sample grid");
    require_finite(row, "curve sample");
  }
}

double weighted_dot(const Grid& g, const std::vector<double>& a,
                    const std::vector<double>& b) {
  require(a.size() == b.size() && static_cast<int>(a.size()) == g.size(),
          "weighted_dot operands must match the grid");
  const std::vector<double>& w = g.weights();
  double acc = 0.0;
  // a*b first: keeps the reduction exactly symmetric in its two arguments.
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i] * w[i];
  return acc;
}

double weighted_norm_sq(const Grid& g, const std::vector<double>& a) {
  return weighted_dot(g, a, a);
}

double inner_product(const Curve& f, const Curve& g) {
  require(f.grid == g.grid, "curves live on different grids");
  return weighted_dot(f.grid, f.values, g.values);
}

double norm_sq(const Curve& f) { return weighted_dot(f.grid, f.values, f.values); }

std::vector<double> pointwise_mean(const CurveSample& sample) {
  const int p = sample.grid().size();
  std::vector<double> mean(p, 0.0);
  for (int i = 0; i < sample.size(); ++i) {
    const std::vector<double>& row = sample.row(i);
    for (int k = 0; k < p; ++k) mean[k] += row[k];
  }
  const double inv = 1.0 / sample.size();
  for (double& v : mean) v *= inv;
  return mean;
}

CurveSample center(const CurveSample& sample) {
  const std::vector<double> mean = pointwise_mean(sample);
  double max_mean = 0.0, max_value = 0.0;
  for (double v : mean) max_mean = std::max(max_mean, std::fabs(v));
  for (int i = 0; i < sample.size(); ++i) {
    for (double v : sample.row(i)) max_value = std::max(max_value, std::fabs(v));
  }
  // Already centered to rounding level: return unchanged so that a second
  // application is a bitwise no-op.
  if (max_mean <= 1e-13 * (1.0 + max_value)) return sample;
  std::vector<std::vector<double>> rows = sample.rows();
  for (auto& row : rows) {
    for (size_t k = 0; k < row.size(); ++k) row[k] -= mean[k];
  }
  return CurveSample(sample.grid(), std::move(rows), sample.label());
}

}  // namespace eftest
