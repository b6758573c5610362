#include "eftest/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "eftest/errors.hpp"

namespace eftest {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == delimiter) {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

bool parse_int(const std::string& raw, int& out) {
  const std::string s = trim(raw);
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_double(const std::string& raw, double& out) {
  const std::string s = trim(raw);
  if (s.empty()) return false;
  try {
    size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size() && std::isfinite(out);
  } catch (const std::exception&) {
    return false;
  }
}

bool is_missing_marker(const std::string& raw) {
  std::string s = trim(raw);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s.empty() || s == "na" || s == "nan" || s == "null";
}

std::string join_lines(const std::vector<long>& lines) {
  std::string out;
  const size_t cap = 20;
  for (size_t i = 0; i < lines.size() && i < cap; ++i) {
    if (i) out += ", ";
    out += std::to_string(lines[i]);
  }
  if (lines.size() > cap) out += ", ...";
  return out;
}

}  // namespace

int days_in_year(int year) {
  const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  return leap ? 366 : 365;
}

RawSeries load_csv(const std::filesystem::path& file, const CsvSchema& schema) {
  std::ifstream in(file);
  if (!in) throw data_error("cannot open " + file.string());

  std::string line;
  long line_number = 0;
  // Header: the first nonempty line.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_number;
    if (!trim(line).empty()) {
      header = split(line, schema.delimiter);
      break;
    }
  }
  if (header.empty()) throw data_error("no records in " + file.string());

  const auto column_index = [&](const std::string& name) {
    for (size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return static_cast<int>(i);
    }
    throw data_error("column '" + name + "' not found in " + file.string());
  };
  const int year_col = column_index(schema.year_col);
  const int day_col = column_index(schema.day_col);
  const int value_col = column_index(schema.value_col);
  const int station_col =
      schema.station_col.empty() ? -1 : column_index(schema.station_col);
  const int needed = std::max(std::max(year_col, day_col),
                              std::max(value_col, station_col)) + 1;

  RawSeries series;
  std::vector<long> malformed;
  std::vector<std::string> duplicates;
  std::map<std::pair<int, int>, long> seen;
  std::vector<std::string> stations;

  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split(line, schema.delimiter);
    if (static_cast<int>(fields.size()) < needed) {
      malformed.push_back(line_number);
      continue;
    }
    RawRecord record;
    record.line = line_number;
    if (!parse_int(fields[year_col], record.year) ||
        !parse_int(fields[day_col], record.day) || record.day < 1 ||
        record.day > days_in_year(record.year)) {
      malformed.push_back(line_number);
      continue;
    }
    if (is_missing_marker(fields[value_col])) {
      record.missing = true;
      record.value = 0.0;
    } else if (!parse_double(fields[value_col], record.value)) {
      malformed.push_back(line_number);
      continue;
    }
    if (station_col >= 0) {
      const std::string station = trim(fields[station_col]);
      if (std::find(stations.begin(), stations.end(), station) == stations.end()) {
        stations.push_back(station);
      }
    }
    const auto key = std::make_pair(record.year, record.day);
    const auto inserted = seen.emplace(key, line_number);
    if (!inserted.second) {
      duplicates.push_back("(" + std::to_string(record.year) + "," +
                           std::to_string(record.day) + ") at lines " +
                           std::to_string(inserted.first->second) + " and " +
                           std::to_string(line_number));
      continue;
    }
    series.records.push_back(record);
  }

  if (!malformed.empty()) {
    throw data_error("malformed rows in " + file.string() + " at lines " +
                     join_lines(malformed));
  }
  if (!duplicates.empty()) {
    std::string msg = "duplicate (year,day) records in " + file.string() + ": ";
    const size_t cap = 10;
    for (size_t i = 0; i < duplicates.size() && i < cap; ++i) {
      if (i) msg += "; ";
      msg += duplicates[i];
    }
    if (duplicates.size() > cap) msg += "; ...";
    throw data_error(msg);
  }
  if (series.records.empty()) throw data_error("no records in " + file.string());

  if (station_col >= 0) {
    if (stations.size() != 1) {
      throw data_error(file.string() + " mixes " +
                       std::to_string(stations.size()) +
                       " station ids; one file must hold one station");
    }
    series.station = stations.front();
  } else {
    series.station = file.stem().string();
  }

  std::sort(series.records.begin(), series.records.end(),
            [](const RawRecord& a, const RawRecord& b) {
              return a.year != b.year ? a.year < b.year : a.day < b.day;
            });
  for (const RawRecord& r : series.records) {
    if (series.years.empty() || series.years.back() != r.year) {
      series.years.push_back(r.year);
    }
  }
  return series;
}

AnnualCurveSet build_annual_curves(const RawSeries& raw, int basis_size,
                                   int max_missing, const Grid& grid,
                                   SmoothBasis basis) {
  if (max_missing < 0) throw std::invalid_argument("max_missing must be >= 0");
  std::vector<int> years;
  std::vector<std::vector<double>> rows;
  std::vector<DroppedYear> dropped;

  size_t i = 0;
  while (i < raw.records.size()) {
    const int year = raw.records[i].year;
    std::vector<RawPoint> points;
    const int diy = days_in_year(year);
    while (i < raw.records.size() && raw.records[i].year == year) {
      const RawRecord& r = raw.records[i];
      if (!r.missing) {
        points.push_back({static_cast<double>(r.day - 1) / (diy - 1), r.value});
      }
      ++i;
    }
    const int missing_days = diy - static_cast<int>(points.size());
    if (missing_days > max_missing) {
      dropped.push_back({year, "missing " + std::to_string(missing_days) +
                                   " of " + std::to_string(diy) + " days"});
      continue;
    }
    rows.push_back(smooth_to_curve(points, basis_size, grid, basis).values);
    years.push_back(year);
  }

  if (rows.size() < 2) {
    throw data_error("station " + raw.station +
                     " has fewer than 2 usable years after screening");
  }
  AnnualCurveSet set{raw.station, std::move(years),
                     CurveSample(grid, std::move(rows), raw.station),
                     std::move(dropped)};
  return set;
}

AnnualCurveSet detrend_linear(const AnnualCurveSet& set) {
  const int count = set.curves.size();
  if (count < 3) {
    throw std::invalid_argument("detrending needs at least 3 years");
  }
  const Grid& grid = set.curves.grid();
  double mean_year = 0.0, mean_level = 0.0;
  std::vector<double> levels(count);
  for (int i = 0; i < count; ++i) {
    const std::vector<double>& row = set.curves.row(i);
    double level = 0.0;
    for (int k = 0; k < grid.size(); ++k) level += grid.weight(k) * row[k];
    levels[i] = level;
    mean_year += set.years[i];
    mean_level += levels[i];
  }
  mean_year /= count;
  mean_level /= count;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < count; ++i) {
    const double xc = set.years[i] - mean_year;
    sxx += xc * xc;
    sxy += xc * (levels[i] - mean_level);
  }
  const double slope = sxy / sxx;

  std::vector<std::vector<double>> rows = set.curves.rows();
  for (int i = 0; i < count; ++i) {
    const double fitted = mean_level + slope * (set.years[i] - mean_year);
    for (double& v : rows[i]) v -= fitted;
  }
  return AnnualCurveSet{set.station, set.years,
                        CurveSample(set.curves.grid(), std::move(rows),
                                    set.curves.label()),
                        set.dropped};
}

void write_curve_csv(const CurveSample& sample, const std::vector<int>& ids,
                     std::ostream& out) {
  if (static_cast<int>(ids.size()) != sample.size()) {
    throw std::invalid_argument("one id per curve is required");
  }
  out << "curve,grid_index,value\n";
  char buf[64];
  for (int i = 0; i < sample.size(); ++i) {
    const std::vector<double>& row = sample.row(i);
    for (size_t k = 0; k < row.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[k]);
      out << ids[i] << ',' << k << ',' << buf << '\n';
    }
  }
}

CurveFile read_curve_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw data_error("cannot open " + file.string());
  std::string line;
  long line_number = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_number;
    if (!trim(line).empty()) {
      header = split(line, ',');
      break;
    }
  }
  if (header.size() != 3 || trim(header[0]) != "curve" ||
      trim(header[1]) != "grid_index" || trim(header[2]) != "value") {
    throw data_error(file.string() +
                     " is not a curve file (expected header curve,grid_index,value)");
  }

  struct Triple {
    int id;
    int index;
    double value;
  };
  std::vector<Triple> triples;
  std::vector<long> malformed;
  int max_index = -1;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    Triple t{};
    if (fields.size() != 3 || !parse_int(fields[0], t.id) ||
        !parse_int(fields[1], t.index) || t.index < 0 ||
        !parse_double(fields[2], t.value)) {
      malformed.push_back(line_number);
      continue;
    }
    max_index = std::max(max_index, t.index);
    triples.push_back(t);
  }
  if (!malformed.empty()) {
    throw data_error("malformed rows in " + file.string() + " at lines " +
                     join_lines(malformed));
  }
  if (triples.empty()) throw data_error("no records in " + file.string());
  const int grid_size = max_index + 1;
  if (grid_size < 16) {
    throw data_error(file.string() + " holds fewer than 16 grid points per curve");
  }

  CurveFile out;
  std::map<int, int> slot_of_id;
  std::vector<std::vector<char>> filled;
  for (const Triple& t : triples) {
    auto found = slot_of_id.find(t.id);
    if (found == slot_of_id.end()) {
      slot_of_id.emplace(t.id, static_cast<int>(out.ids.size()));
      out.ids.push_back(t.id);
      out.rows.emplace_back(grid_size, 0.0);
      filled.emplace_back(grid_size, 0);
      found = slot_of_id.find(t.id);
    }
    const int slot = found->second;
    if (filled[slot][t.index]) {
      throw data_error("curve " + std::to_string(t.id) + " in " + file.string() +
                       " repeats grid index " + std::to_string(t.index));
    }
    filled[slot][t.index] = 1;
    out.rows[slot][t.index] = t.value;
  }
  for (size_t s = 0; s < out.rows.size(); ++s) {
    for (int k = 0; k < grid_size; ++k) {
      if (!filled[s][k]) {
        throw data_error("curve " + std::to_string(out.ids[s]) + " in " +
                         file.string() + " is missing grid index " +
                         std::to_string(k));
      }
    }
  }
  return out;
}

CurveSample to_curve_sample(const CurveFile& file, const std::string& label) {
  if (file.rows.size() < 2) {
    throw data_error("curve file holds fewer than 2 curves");
  }
  const Grid grid(static_cast<int>(file.rows.front().size()));
  return CurveSample(grid, file.rows, label);
}

}  // namespace eftest
