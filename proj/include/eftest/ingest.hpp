#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "eftest/grid.hpp"
#include "eftest/smoothing.hpp"

namespace eftest {

// Column names for long-form daily CSV data. station_col may be empty, in
// which case the station id is the file stem; when present, a file must
// contain exactly one distinct station value.
struct CsvSchema {
  std::string year_col = "year";
  std::string day_col = "day";
  std::string value_col = "value";
  std::string station_col;
  char delimiter = ',';
};

struct RawRecord {
  int year = 0;
  int day = 0;  // 1-based day of year
  double value = 0.0;
  bool missing = false;
  long line = 0;  // 1-based source line, for error messages
};

struct RawSeries {
  std::string station;
  std::vector<RawRecord> records;  // sorted by (year, day)
  std::vector<int> years;          // distinct years present, ascending
};

// Gregorian rule; leap years have 366 days.
int days_in_year(int year);

// Parses one station's long-form CSV. Malformed rows and duplicate
// (year, day) pairs are reported with line numbers; an empty file (no data
// rows) is an error. Empty / NA / NaN values become missing records.
RawSeries load_csv(const std::filesystem::path& file,
                   const CsvSchema& schema = {});

struct DroppedYear {
  int year = 0;
  std::string reason;
};

struct AnnualCurveSet {
  std::string station;
  std::vector<int> years;  // retained years, ascending, one per curve
  CurveSample curves;
  std::vector<DroppedYear> dropped;
};

// One smooth curve per retained year: day d of year y maps to position
// (d - 1) / (days_in_year(y) - 1), observed values are least-squares
// smoothed onto the basis and evaluated on `grid`. Years missing more than
// max_missing days are dropped with a reason.
AnnualCurveSet build_annual_curves(const RawSeries& raw, int basis_size,
                                   int max_missing, const Grid& grid,
                                   SmoothBasis basis = SmoothBasis::bspline);

// Removes a linear trend in the yearly mean level: regresses the quadrature
// mean of each curve on the calendar year (OLS) and subtracts the fitted
// yearly constant pointwise. Needs at least 3 years.
AnnualCurveSet detrend_linear(const AnnualCurveSet& set);

// Curve-sample interchange CSV: header curve,grid_index,value, one row per
// (curve id, grid point). The grid is implied: uniform on [0,1] with
// max grid_index + 1 points.
void write_curve_csv(const CurveSample& sample, const std::vector<int>& ids,
                     std::ostream& out);

struct CurveFile {
  std::vector<int> ids;
  std::vector<std::vector<double>> rows;
};

// Parses the interchange CSV; every curve must cover every grid index
// exactly once. Use to_curve_sample to materialize.
CurveFile read_curve_csv(const std::filesystem::path& file);
CurveSample to_curve_sample(const CurveFile& file, const std::string& label);

}  // namespace eftest
