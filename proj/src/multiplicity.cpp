#include "eftest/multiplicity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace eftest {

namespace {

void validate_inputs(const std::vector<double>& p_values, double alpha) {
  if (p_values.empty()) throw std::invalid_argument("empty p-value family");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("level alpha must lie strictly inside (0,1)");
  }
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("p-values must lie in [0,1]");
    }
  }
}

}  // namespace

std::vector<bool> bonferroni(const std::vector<double>& p_values, double alpha) {
  validate_inputs(p_values, alpha);
  const double threshold = alpha / p_values.size();
  std::vector<bool> reject(p_values.size());
  for (size_t k = 0; k < p_values.size(); ++k) {
    reject[k] = p_values[k] < threshold;
  }
  return reject;
}

std::vector<bool> holm(const std::vector<double>& p_values, double alpha) {
  validate_inputs(p_values, alpha);
  const size_t count = p_values.size();
  std::vector<size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  // Ties keep original position order; the decision is the same either way
  // because tied p-values face the same thresholds until the walk stops.
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return p_values[a] < p_values[b]; });
  std::vector<bool> reject(count, false);
  for (size_t k = 0; k < count; ++k) {
    const double threshold = alpha / static_cast<double>(count - k);
    if (p_values[order[k]] < threshold) {
      reject[order[k]] = true;
    } else {
      break;
    }
  }
  return reject;
}

}  // namespace eftest
