#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "eftest/errors.hpp"
#include "eftest/grid.hpp"
#include "eftest/ingest.hpp"
#include "eftest/smoothing.hpp"
#include "helpers.hpp"

using namespace eftest;
namespace tt = eftest::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("eftest_ingest_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }

  fs::path write(const std::string& name, const std::string& content) const {
    const fs::path file = path / name;
    std::ofstream out(file);
    out << content;
    return file;
  }
};

}  // namespace

TEST_CASE("bspline basis is a partition of unity") {
  std::vector<double> pos;
  for (int i = 0; i <= 50; ++i) pos.push_back(i / 50.0);
  const Matrix design = smoothing_design(pos, 7, SmoothBasis::bspline);
  CHECK(design.rows() == 51);
  CHECK(design.cols() == 11);  // 7 interior knots + 4
  for (int i = 0; i < design.rows(); ++i) {
    double sum = 0.0;
    for (int j = 0; j < design.cols(); ++j) {
      CHECK(design(i, j) >= -1e-15);
      sum += design(i, j);
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("bspline smoothing reproduces cubic polynomials") {
  auto cubic = [](double t) {
    return 1.0 - 2.0 * t + 3.0 * t * t - 0.5 * t * t * t;
  };
  std::vector<RawPoint> raw;
  for (int i = 0; i < 30; ++i) {
    // endpoints exact, interior slightly irregular
    double t = i / 29.0;
    if (i > 0 && i < 29) t = (i + 0.3 * std::sin(1.0 + i)) / 29.0;
    raw.push_back({t, cubic(t)});
  }
  const Grid g(101);
  const Curve fit = smooth_to_curve(raw, 6, g, SmoothBasis::bspline);
  for (int k = 0; k < g.size(); ++k) {
    CHECK(std::abs(fit.values[k] - cubic(g.point(k))) <= 1e-9);
  }
}

TEST_CASE("fourier design columns are the stated harmonics") {
  const std::vector<double> pos = {0.0, 0.13, 0.5, 0.77, 1.0};
  const Matrix d = smoothing_design(pos, 3, SmoothBasis::fourier);
  CHECK(d.cols() == 7);
  const double s2 = std::sqrt(2.0);
  for (size_t i = 0; i < pos.size(); ++i) {
    const double t = pos[i];
    CHECK(d(i, 0) == 1.0);
    CHECK(std::abs(d(i, 1) - s2 * std::sin(2 * M_PI * t)) <= 1e-15);
    CHECK(std::abs(d(i, 2) - s2 * std::cos(2 * M_PI * t)) <= 1e-15);
    CHECK(std::abs(d(i, 3) - s2 * std::sin(4 * M_PI * t)) <= 1e-15);
    CHECK(std::abs(d(i, 4) - s2 * std::cos(4 * M_PI * t)) <= 1e-15);
  }
}

TEST_CASE("fourier smoothing reproduces band-limited functions") {
  auto f = [](double t) {
    return 2.0 + 0.7 * std::sqrt(2.0) * std::sin(2 * M_PI * t) -
           1.2 * std::sqrt(2.0) * std::cos(4 * M_PI * t);
  };
  std::vector<RawPoint> raw;
  for (int i = 0; i < 40; ++i) {
    const double t = i / 39.0;
    raw.push_back({t, f(t)});
  }
  const Grid g(201);
  const Curve fit = smooth_to_curve(raw, 3, g, SmoothBasis::fourier);
  for (int k = 0; k < g.size(); ++k) {
    CHECK(std::abs(fit.values[k] - f(g.point(k))) <= 1e-10);
  }
}

TEST_CASE("smoothing rejects bad inputs") {
  const Grid g(32);
  std::vector<RawPoint> raw;
  for (int i = 0; i < 7; ++i) raw.push_back({i / 6.0, 1.0});
  // 7 points cannot support 4 + 4 basis functions
  CHECK_THROWS_AS(smooth_to_curve(raw, 4, g), std::invalid_argument);
  raw.push_back({1.5, 1.0});
  CHECK_THROWS_AS(smooth_to_curve(raw, 1, g), std::invalid_argument);
  raw.back() = {std::nan(""), 1.0};
  CHECK_THROWS_AS(smooth_to_curve(raw, 1, g), std::invalid_argument);

  // all observations crowd the left end: right-end splines see no data
  std::vector<RawPoint> gap;
  for (int i = 0; i < 40; ++i) gap.push_back({0.3 * i / 39.0, 1.0});
  bool thrown = false;
  try {
    smooth_to_curve(gap, 8, g);
  } catch (const numeric_error& e) {
    thrown = true;
    CHECK(std::string(e.what()).find("basis function") != std::string::npos);
  }
  CHECK(thrown);
}

TEST_CASE("gregorian day counts") {
  CHECK(days_in_year(2000) == 366);
  CHECK(days_in_year(1900) == 365);
  CHECK(days_in_year(2024) == 366);
  CHECK(days_in_year(2023) == 365);
  CHECK(days_in_year(1600) == 366);
}

TEST_CASE("loading a well-formed file sorts and summarizes") {
  TempDir dir;
  const fs::path file = dir.write("boulia.csv",
                                  "year,day,value\n"
                                  "\n"
                                  "2001,2,4.5\r\n"
                                  "2000,300, 7.25 \n"
                                  "2001,1,3.5\n"
                                  "2000,5,NA\n");
  const RawSeries s = load_csv(file);
  CHECK(s.station == "boulia");
  REQUIRE(s.records.size() == 4);
  CHECK(s.years == std::vector<int>{2000, 2001});
  CHECK(s.records[0].year == 2000);
  CHECK(s.records[0].day == 5);
  CHECK(s.records[0].missing);
  CHECK(s.records[1].day == 300);
  CHECK(s.records[1].value == 7.25);
  CHECK_FALSE(s.records[1].missing);
  CHECK(s.records[2].year == 2001);
  CHECK(s.records[2].day == 1);
  CHECK(s.records[3].value == 4.5);
  CHECK(s.records[3].line == 3);  // original line numbers survive sorting
}

TEST_CASE("missing markers are case-insensitive") {
  TempDir dir;
  const fs::path file = dir.write("m.csv",
                                  "year,day,value\n"
                                  "2001,1,\n"
                                  "2001,2,NA\n"
                                  "2001,3,nan\n"
                                  "2001,4,NULL\n"
                                  "2001,5,0.0\n");
  const RawSeries s = load_csv(file);
  REQUIRE(s.records.size() == 5);
  for (int i = 0; i < 4; ++i) CHECK(s.records[i].missing);
  CHECK_FALSE(s.records[4].missing);
}

TEST_CASE("malformed rows are reported together with line numbers") {
  TempDir dir;
  const fs::path file = dir.write("bad.csv",
                                  "year,day,value\n"
                                  "2001,1,2.0\n"
                                  "2001,abc,3.4\n"
                                  "2001,5\n"
                                  "2001,0,2.0\n"
                                  "2001,366,2.0\n"
                                  "2001,7,not_a_number\n");
  try {
    load_csv(file);
    FAIL("expected data_error");
  } catch (const data_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("malformed") != std::string::npos);
    CHECK(msg.find("at lines 3, 4, 5, 6, 7") != std::string::npos);
  }
}

TEST_CASE("duplicate (year, day) pairs name both source lines") {
  TempDir dir;
  const fs::path file = dir.write("dup.csv",
                                  "year,day,value\n"
                                  "2001,1,2.0\n"
                                  "2001,2,2.5\n"
                                  "2001,1,9.9\n");
  try {
    load_csv(file);
    FAIL("expected data_error");
  } catch (const data_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("duplicate") != std::string::npos);
    CHECK(msg.find("(2001,1)") != std::string::npos);
    CHECK(msg.find("2 and 4") != std::string::npos);
  }
}

TEST_CASE("station column must be single-valued when configured") {
  TempDir dir;
  CsvSchema schema;
  schema.station_col = "station";
  const fs::path ok = dir.write("s1.csv",
                                "year,day,value,station\n"
                                "2001,1,2.0,alpha\n"
                                "2001,2,2.5,alpha\n");
  CHECK(load_csv(ok, schema).station == "alpha");

  const fs::path mixed = dir.write("s2.csv",
                                   "year,day,value,station\n"
                                   "2001,1,2.0,alpha\n"
                                   "2001,2,2.5,beta\n");
  CHECK_THROWS_AS(load_csv(mixed, schema), data_error);
}

TEST_CASE("schema renames and delimiter changes are honored") {
  TempDir dir;
  CsvSchema schema;
  schema.year_col = "yr";
  schema.day_col = "doy";
  schema.value_col = "temp";
  schema.delimiter = ';';
  const fs::path file = dir.write("alt.csv",
                                  "yr;doy;temp\n"
                                  "1999;10;-2.25\n"
                                  "1999;11;-2.5\n");
  const RawSeries s = load_csv(file, schema);
  CHECK(s.records[0].value == -2.25);
  CHECK_THROWS_AS(load_csv(file), data_error);  // default names won't resolve
}

TEST_CASE("structural file problems raise data errors") {
  TempDir dir;
  CHECK_THROWS_AS(load_csv(dir.path / "absent.csv"), data_error);
  CHECK_THROWS_AS(load_csv(dir.write("empty.csv", "")), data_error);
  CHECK_THROWS_AS(load_csv(dir.write("onlyheader.csv", "year,day,value\n")),
                  data_error);
  CHECK_THROWS_AS(load_csv(dir.write("nocol.csv", "year,day\n2001,1\n")),
                  data_error);
}

namespace {

// Daily series following offset + 0.7 sqrt(2) sin(2 pi t): band-limited, so
// a fourier fit recovers it exactly.
std::string synthetic_year(int year, double offset, int skip_from = 0,
                           int skip_count = 0) {
  std::ostringstream out;
  const int diy = days_in_year(year);
  for (int d = 1; d <= diy; ++d) {
    if (d >= skip_from && d < skip_from + skip_count) continue;
    const double t = static_cast<double>(d - 1) / (diy - 1);
    const double v = offset + 0.7 * std::sqrt(2.0) * std::sin(2 * M_PI * t);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", year, d, v);
    out << buf;
  }
  return out.str();
}

}  // namespace

TEST_CASE("annual curves recover a known daily function across leap years") {
  TempDir dir;
  const fs::path file = dir.write(
      "station.csv", "year,day,value\n" + synthetic_year(2020, 10.0) +
                         synthetic_year(2021, 11.0));
  const RawSeries raw = load_csv(file);
  const Grid g(101);
  const AnnualCurveSet set =
      build_annual_curves(raw, 3, 30, g, SmoothBasis::fourier);
  CHECK(set.years == std::vector<int>{2020, 2021});
  CHECK(set.dropped.empty());
  REQUIRE(set.curves.size() == 2);
  for (int i = 0; i < 2; ++i) {
    const double offset = 10.0 + i;
    for (int k = 0; k < g.size(); ++k) {
      const double truth =
          offset + 0.7 * std::sqrt(2.0) * std::sin(2 * M_PI * g.point(k));
      CHECK(std::abs(set.curves.row(i)[k] - truth) <= 1e-8);
    }
  }

  // same input, same output, bit for bit
  const AnnualCurveSet rerun =
      build_annual_curves(load_csv(file), 3, 30, g, SmoothBasis::fourier);
  CHECK(rerun.curves.rows() == set.curves.rows());
}

TEST_CASE("years beyond the missing-day budget are dropped with a reason") {
  TempDir dir;
  const fs::path file = dir.write(
      "gappy.csv",
      "year,day,value\n" + synthetic_year(2001, 1.0) +
          synthetic_year(2002, 2.0, 100, 40) + synthetic_year(2003, 3.0));
  const Grid g(101);
  const AnnualCurveSet set =
      build_annual_curves(load_csv(file), 3, 30, g, SmoothBasis::fourier);
  CHECK(set.years == std::vector<int>{2001, 2003});
  REQUIRE(set.dropped.size() == 1);
  CHECK(set.dropped[0].year == 2002);
  CHECK(set.dropped[0].reason == "missing 40 of 365 days");

  // records marked NA count as missing days too
  std::string na_year = synthetic_year(2005, 1.0, 1, 0);
  size_t pos = 0;
  int converted = 0;
  while (converted < 31 && (pos = na_year.find(",", pos)) != std::string::npos) {
    const size_t comma2 = na_year.find(",", pos + 1);
    const size_t eol = na_year.find("\n", comma2);
    na_year.replace(comma2 + 1, eol - comma2 - 1, "NA");
    pos = comma2 + 3;
    ++converted;
  }
  const fs::path file2 = dir.write(
      "gappy2.csv",
      "year,day,value\n" + na_year + synthetic_year(2006, 2.0));
  CHECK_THROWS_AS(
      build_annual_curves(load_csv(file2), 3, 30, Grid(101),
                          SmoothBasis::fourier),
      data_error);  // only one usable year remains
}

TEST_CASE("linear trend in the yearly level is removed exactly") {
  const Grid g(64);
  std::vector<int> years = {1990, 1991, 1994, 1999};
  std::vector<std::vector<double>> rows;
  std::vector<double> base(g.size());
  for (int k = 0; k < g.size(); ++k) {
    base[k] = std::sin(2 * M_PI * g.point(k)) + 0.3;
  }
  for (int year : years) {
    std::vector<double> row(g.size());
    const double level = 4.0 + 0.25 * (year - 1990);
    for (int k = 0; k < g.size(); ++k) row[k] = base[k] + level;
    rows.push_back(row);
  }
  const AnnualCurveSet set{"demo", years, CurveSample(g, rows, "demo"), {}};
  const AnnualCurveSet flat = detrend_linear(set);
  REQUIRE(flat.curves.size() == 4);
  // all years collapse onto the same centered shape
  for (int i = 1; i < 4; ++i) {
    for (int k = 0; k < g.size(); ++k) {
      CHECK(std::abs(flat.curves.row(i)[k] - flat.curves.row(0)[k]) <= 1e-10);
    }
  }
  // quadrature mean of each detrended curve is zero
  for (int i = 0; i < 4; ++i) {
    double level = 0.0;
    for (int k = 0; k < g.size(); ++k) {
      level += g.weight(k) * flat.curves.row(i)[k];
    }
    CHECK(std::abs(level) <= 1e-10);
  }
  // idempotent up to rounding
  const AnnualCurveSet twice = detrend_linear(flat);
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < g.size(); ++k) {
      CHECK(std::abs(twice.curves.row(i)[k] - flat.curves.row(i)[k]) <= 1e-10);
    }
  }

  const AnnualCurveSet tiny{"t",
                            {1990, 1991},
                            CurveSample(g, {rows[0], rows[1]}),
                            {}};
  CHECK_THROWS_AS(detrend_linear(tiny), std::invalid_argument);
}

TEST_CASE("curve csv writes round trip bit for bit") {
  TempDir dir;
  const Grid g(16);
  const CurveSample s = tt::random_sample(g, 3, 123u, 0, "rt");
  const fs::path file = dir.path / "curves.csv";
  {
    std::ofstream out(file);
    write_curve_csv(s, {3, 17, 4}, out);
  }
  const CurveFile back = read_curve_csv(file);
  CHECK(back.ids == std::vector<int>{3, 17, 4});
  REQUIRE(back.rows.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(back.rows[i] == s.row(i));

  const CurveSample sample = to_curve_sample(back, "rt");
  CHECK(sample.grid() == g);
  CHECK(sample.rows() == s.rows());
  CHECK(sample.label() == "rt");

  std::ostringstream sink;
  CHECK_THROWS_AS(write_curve_csv(s, {1, 2}, sink), std::invalid_argument);
}

TEST_CASE("curve csv validation catches structural damage") {
  TempDir dir;
  const Grid g(16);
  const CurveSample s = tt::random_sample(g, 2, 321u, 0);
  std::ostringstream buf;
  write_curve_csv(s, {0, 1}, buf);
  const std::string good = buf.str();

  // header must match
  CHECK_THROWS_AS(
      read_curve_csv(dir.write("h.csv", "a,b,c\n0,0,1.0\n")), data_error);

  // dropping one row leaves a hole
  {
    std::string damaged = good;
    const size_t second_line = damaged.find('\n', damaged.find('\n') + 1);
    const size_t third_line = damaged.find('\n', second_line + 1);
    damaged.erase(second_line + 1, third_line - second_line);
    CHECK_THROWS_AS(read_curve_csv(dir.write("hole.csv", damaged)), data_error);
  }

  // duplicating a row repeats a grid index
  {
    const size_t first_nl = good.find('\n');
    const size_t second_nl = good.find('\n', first_nl + 1);
    const std::string row = good.substr(first_nl + 1, second_nl - first_nl);
    CHECK_THROWS_AS(read_curve_csv(dir.write("dup.csv", good + row)),
                    data_error);
  }

  // malformed rows name their lines
  try {
    read_curve_csv(dir.write("mal.csv", "curve,grid_index,value\n0,zero,1\n"));
    FAIL("expected data_error");
  } catch (const data_error& e) {
    CHECK(std::string(e.what()).find("at lines 2") != std::string::npos);
  }

  // fewer than 16 grid points cannot form a curve sample
  std::string small = "curve,grid_index,value\n";
  for (int k = 0; k < 8; ++k) {
    small += "0," + std::to_string(k) + ",1.0\n";
  }
  CHECK_THROWS_AS(read_curve_csv(dir.write("small.csv", small)), data_error);
}
