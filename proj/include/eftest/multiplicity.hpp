#pragma once

#include <vector>

namespace eftest {

// Family-wise decisions over a vector of marginal p-values at level alpha.
// Bonferroni: reject k iff p_k < alpha / size. Holm: step down through the
// ascending p-values (ties broken by original position), rejecting while
// p_(k) < alpha / (size - k + 1) and stopping at the first failure. Holm
// rejects a superset of Bonferroni on every input.
std::vector<bool> bonferroni(const std::vector<double>& p_values,
                             double alpha);
std::vector<bool> holm(const std::vector<double>& p_values, double alpha);

}  // namespace eftest
