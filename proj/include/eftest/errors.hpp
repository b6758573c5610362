#pragma once

#include <stdexcept>
#include <string>

namespace eftest {

// Malformed or inconsistent input data: bad CSV rows, duplicate dates,
// mismatched grids between files, truncated cache files.
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// A computation cannot proceed for numerical reasons: eigensolver
// non-convergence, rank-deficient smoothing design, degenerate eigenvalue
// spacing in the long-run variance pipeline.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eftest
