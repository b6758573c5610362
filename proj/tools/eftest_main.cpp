// Command line surface. Subcommands wrap the library one-to-one; every
// report embeds the full effective configuration so a run can be repeated
// from its own output. Machine-readable results are JSON on stdout, notices
// go to stderr. Exit codes: 0 completed, 1 usage error, 2 data error,
// 3 numerical degeneracy. The decision of a test is payload, not exit code.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "eftest/covariance.hpp"
#include "eftest/dgp.hpp"
#include "eftest/errors.hpp"
#include "eftest/grid.hpp"
#include "eftest/ingest.hpp"
#include "eftest/multiplicity.hpp"
#include "eftest/null_law.hpp"
#include "eftest/nu_measure.hpp"
#include "eftest/parallel.hpp"
#include "eftest/selfnorm.hpp"
#include "eftest/smoothing.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eftest;

namespace {

constexpr int kFormatVersion = 1;

// JSON has no non-finite numbers; they round-trip as strings.
json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0.0 ? "inf" : "-inf";
}

const char* kind_name(TestKind kind) {
  switch (kind) {
    case TestKind::eigenfunction:
      return "eigenfunction";
    case TestKind::eigenvalue:
      return "eigenvalue";
    default:
      return "lrv_plugin";
  }
}

json result_json(const TestResult& r) {
  return json{{"kind", kind_name(r.kind)},
              {"j", r.j},
              {"delta", r.delta},
              {"alpha", r.alpha},
              {"m", r.m},
              {"n", r.n},
              {"d_hat", json_number(r.d_hat)},
              {"v_hat", json_number(r.v_hat)},
              {"w_hat", json_number(r.w_hat)},
              {"q_alpha", json_number(r.q_alpha)},
              {"p_value", json_number(r.p_value)},
              {"reject", r.reject},
              {"warnings", r.warnings}};
}

// Null-table knobs shared by every subcommand that needs quantiles.
struct TableOptions {
  double lower = 0.1;
  int lambda_points = 91;
  int paths = 1000;
  std::int64_t replicates = 100000;
  std::uint64_t seed = 20240101;
  std::string cache_dir = ".eftest-cache";
};

// bare_names: simulate-null owns --replicates/--seed; elsewhere the table
// flags carry a table- prefix so the run's own knobs keep the plain names.
void add_table_options(CLI::App* cmd, TableOptions& t, bool bare_names) {
  cmd->add_option("--lower", t.lower,
                  "lower end of the uniform weighting measure")
      ->capture_default_str();
  cmd->add_option("--lambda-points", t.lambda_points,
                  "grid points of the weighting measure")
      ->capture_default_str();
  cmd->add_option("--paths", t.paths, "Brownian path discretization steps")
      ->capture_default_str();
  cmd->add_option(bare_names ? "--replicates" : "--table-replicates",
                  t.replicates, "Monte Carlo replicates of the null table")
      ->capture_default_str();
  cmd->add_option(bare_names ? "--seed" : "--table-seed", t.seed,
                  "null-table seed")
      ->capture_default_str();
  cmd->add_option("--cache-dir", t.cache_dir, "null-table cache directory")
      ->envname("EFTEST_CACHE_DIR")
      ->capture_default_str();
}

json table_config_json(const TableOptions& t, int workers) {
  return json{{"nu", {{"lower", t.lower}, {"lambda_points", t.lambda_points}}},
              {"paths", t.paths},
              {"replicates", t.replicates},
              {"seed", t.seed},
              {"cache_dir", t.cache_dir},
              {"workers", workers}};
}

QuantileTable fetch_table(const TableOptions& t, int workers, json* info) {
  const NuMeasure nu = NuMeasure::uniform(t.lower, t.lambda_points);
  const fs::path dir(t.cache_dir);
  const fs::path file =
      dir / table_cache_name(nu, t.paths, t.replicates, t.seed);
  if (!fs::exists(file)) {
    std::cerr << "no cached null table at " << file.string()
              << "; simulating (paths=" << t.paths
              << ", replicates=" << t.replicates << ", seed=" << t.seed
              << ")\n";
  }
  bool hit = false;
  QuantileTable table =
      load_or_simulate(nu, t.paths, t.replicates, t.seed, dir, workers, &hit);
  if (info) {
    *info = json{{"cache_file", file.string()},
                 {"cache_hit", hit},
                 {"path_grid", table.path_grid},
                 {"replicates", table.replicates},
                 {"seed", table.seed},
                 {"redraws", table.redraws},
                 {"quantiles",
                  {{"q50", json_number(quantile(table, 0.5))},
                   {"q90", json_number(quantile(table, 0.90))},
                   {"q95", json_number(quantile(table, 0.95))},
                   {"q99", json_number(quantile(table, 0.99))}}},
                 {"warnings", table.warnings}};
  }
  return table;
}

void emit_json(const json& report, const std::string& dest) {
  const std::string text = report.dump(2) + "\n";
  if (dest == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(dest);
  if (!out) throw data_error("cannot write " + dest);
  out << text;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  TableOptions table;
  int workers = 1;
};

int cmd_simulate_null(const SimulateOpts& o) {
  json info;
  fetch_table(o.table, o.workers, &info);
  const json report{{"command", "simulate-null"},
                    {"format_version", kFormatVersion},
                    {"config", table_config_json(o.table, o.workers)},
                    {"table", info}};
  emit_json(report, "-");
  return 0;
}

// -------------------------------------------------------------------- test

struct TestOpts {
  std::string x_file;
  std::string y_file;
  int j = 1;
  double delta = 0.1;
  double alpha = 0.05;
  bool eigenvalue = false;
  bool no_center = false;
  TableOptions table;
  int workers = 1;
  std::string json_out = "-";
};

CurveSample load_curve_sample(const std::string& file, bool do_center) {
  const CurveFile cf = read_curve_csv(file);
  const CurveSample s = to_curve_sample(cf, fs::path(file).stem().string());
  return do_center ? center(s) : s;
}

int cmd_test(const TestOpts& o) {
  const CurveSample x = load_curve_sample(o.x_file, !o.no_center);
  const CurveSample y = load_curve_sample(o.y_file, !o.no_center);
  if (x.grid() != y.grid()) {
    throw data_error("curve files disagree on the grid: " + o.x_file +
                     " holds " + std::to_string(x.grid().size()) +
                     " points per curve, " + o.y_file + " holds " +
                     std::to_string(y.grid().size()));
  }
  json table_info;
  const QuantileTable table = fetch_table(o.table, o.workers, &table_info);
  RelevanceTestConfig cfg;
  cfg.j = o.j;
  cfg.delta = o.delta;
  cfg.alpha = o.alpha;
  cfg.nu = NuMeasure::uniform(o.table.lower, o.table.lambda_points);
  const TestResult result = o.eigenvalue ? test_eigenvalue(x, y, cfg, table)
                                         : test_eigenfunction(x, y, cfg, table);
  json config = table_config_json(o.table, o.workers);
  config["j"] = o.j;
  config["delta"] = o.delta;
  config["alpha"] = o.alpha;
  config["eigenvalue"] = o.eigenvalue;
  config["center"] = !o.no_center;
  const json report{
      {"command", "test"},
      {"format_version", kFormatVersion},
      {"config", config},
      {"inputs",
       {{"x",
         {{"file", o.x_file},
          {"curves", x.size()},
          {"grid_points", x.grid().size()}}},
        {"y",
         {{"file", o.y_file},
          {"curves", y.size()},
          {"grid_points", y.grid().size()}}}}},
      {"table", table_info},
      {"result", result_json(result)}};
  emit_json(report, o.json_out);
  return 0;
}

// ------------------------------------------------------------------- power

struct PowerOpts {
  int scenario = 1;
  std::vector<double> deltas;
  int m = 100;
  int n = 100;
  int replicates = 500;
  int j = 0;
  double delta_threshold = 0.1;
  double alpha = 0.05;
  std::vector<double> tau{8.0, 4.0, 0.5, 0.3};
  double rho = 0.5;
  int burn_in = 30;
  int grid_points = 201;
  std::uint64_t master_seed = 12345;
  TableOptions table;
  int workers = 1;
  std::string out;
};

int cmd_power(const PowerOpts& o) {
  json table_info;
  const QuantileTable table = fetch_table(o.table, o.workers, &table_info);
  PowerStudyConfig pc;
  pc.j = o.j;
  pc.delta_threshold = o.delta_threshold;
  pc.alpha = o.alpha;
  for (int i = 0; i < 4; ++i) pc.tau[i] = o.tau[i];
  pc.rho = o.rho;
  pc.burn_in = o.burn_in;
  pc.grid_points = o.grid_points;
  pc.master_seed = o.master_seed;
  pc.workers = o.workers;
  const std::vector<PowerPoint> points =
      run_power_study(o.scenario, o.deltas, o.m, o.n, o.replicates, pc, table);
  {
    std::ofstream csv(o.out);
    if (!csv) throw data_error("cannot write " + o.out);
    write_power_csv(points, csv);
  }
  json config = table_config_json(o.table, o.workers);
  config["scenario"] = o.scenario;
  config["deltas"] = o.deltas;
  config["m"] = o.m;
  config["n"] = o.n;
  config["power_replicates"] = o.replicates;
  config["j"] = o.j;
  config["delta_threshold"] = o.delta_threshold;
  config["alpha"] = o.alpha;
  config["tau"] = o.tau;
  config["rho"] = o.rho;
  config["burn_in"] = o.burn_in;
  config["grid_points"] = o.grid_points;
  config["master_seed"] = o.master_seed;
  json rows = json::array();
  for (const PowerPoint& p : points) {
    rows.push_back({{"scenario", p.scenario},
                    {"delta", p.delta},
                    {"distance", p.distance},
                    {"m", p.m},
                    {"n", p.n},
                    {"replicates", p.replicates},
                    {"rejection_rate", p.rejection_rate}});
  }
  const json report{{"command", "power"},
                    {"format_version", kFormatVersion},
                    {"config", config},
                    {"table", table_info},
                    {"out", o.out},
                    {"points", rows}};
  emit_json(report, "-");
  return 0;
}

// ------------------------------------------------------------------ ingest

struct IngestOpts {
  std::string input;
  std::string out;
  std::string year_col = "year";
  std::string day_col = "day";
  std::string value_col = "value";
  std::string station_col;
  std::string delimiter = ",";
  int basis_size = 20;
  int max_missing = 30;
  int grid_points = 101;
  bool fourier = false;
  bool detrend = false;
};

AnnualCurveSet run_station_pipeline(const std::string& file,
                                    const IngestOpts& o) {
  if (o.delimiter.size() != 1) {
    throw std::invalid_argument("delimiter must be a single character");
  }
  CsvSchema schema;
  schema.year_col = o.year_col;
  schema.day_col = o.day_col;
  schema.value_col = o.value_col;
  schema.station_col = o.station_col;
  schema.delimiter = o.delimiter[0];
  const RawSeries raw = load_csv(file, schema);
  AnnualCurveSet set = build_annual_curves(
      raw, o.basis_size, o.max_missing, Grid(o.grid_points),
      o.fourier ? SmoothBasis::fourier : SmoothBasis::bspline);
  if (o.detrend) set = detrend_linear(set);
  return set;
}

json ingest_config_json(const IngestOpts& o) {
  return json{{"year_col", o.year_col},
              {"day_col", o.day_col},
              {"value_col", o.value_col},
              {"station_col", o.station_col},
              {"delimiter", o.delimiter},
              {"basis_size", o.basis_size},
              {"max_missing", o.max_missing},
              {"grid_points", o.grid_points},
              {"basis", o.fourier ? "fourier" : "bspline"},
              {"detrend", o.detrend}};
}

json dropped_json(const AnnualCurveSet& set) {
  json dropped = json::array();
  for (const DroppedYear& d : set.dropped) {
    dropped.push_back({{"year", d.year}, {"reason", d.reason}});
  }
  return dropped;
}

int cmd_ingest(const IngestOpts& o) {
  const AnnualCurveSet set = run_station_pipeline(o.input, o);
  {
    std::ofstream csv(o.out);
    if (!csv) throw data_error("cannot write " + o.out);
    write_curve_csv(set.curves, set.years, csv);
  }
  json config = ingest_config_json(o);
  config["input"] = o.input;
  const json report{{"command", "ingest"},
                    {"format_version", kFormatVersion},
                    {"config", config},
                    {"station", set.station},
                    {"years", set.years},
                    {"dropped", dropped_json(set)},
                    {"curves", set.curves.size()},
                    {"out", o.out}};
  emit_json(report, "-");
  return 0;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeOpts {
  std::vector<std::string> files;
  std::vector<int> orders;
  std::vector<double> deltas;
  double alpha = 0.05;
  std::string correction = "none";
  IngestOpts ingest;  // schema + smoothing knobs; detrend flag repurposed
  bool no_detrend = false;
  bool no_center = false;
  TableOptions table;
  int workers = 1;
  std::string csv_out;
  std::string json_out = "-";
};

struct StationCurves {
  std::string file;
  AnnualCurveSet set;
};

int cmd_analyze(const AnalyzeOpts& o) {
  std::vector<int> orders = o.orders.empty() ? std::vector<int>{1} : o.orders;
  std::vector<double> deltas = o.deltas.empty()
                                   ? std::vector<double>{0.1}
                                   : o.deltas;
  if (deltas.size() == 1 && orders.size() > 1) {
    deltas.assign(orders.size(), deltas.front());
  }
  if (deltas.size() != orders.size()) {
    throw std::invalid_argument(
        "--deltas needs one value, or exactly one per entry of --orders");
  }

  // Stations load independently; one broken file must not sink the rest.
  std::vector<StationCurves> stations;
  json failures = json::array();
  for (const std::string& file : o.files) {
    try {
      IngestOpts pipeline = o.ingest;
      pipeline.detrend = !o.no_detrend;
      AnnualCurveSet set = run_station_pipeline(file, pipeline);
      if (!o.no_center) {
        set.curves = center(set.curves);
      }
      stations.push_back({file, std::move(set)});
    } catch (const std::exception& e) {
      failures.push_back({{"file", file}, {"error", e.what()}});
    }
  }
  if (stations.size() < 2) {
    throw data_error("fewer than 2 stations loaded cleanly; cannot form pairs");
  }

  json table_info;
  const QuantileTable table = fetch_table(o.table, o.workers, &table_info);
  const NuMeasure nu = NuMeasure::uniform(o.table.lower, o.table.lambda_points);

  struct PairOutcome {
    int a = 0;
    int b = 0;
    std::vector<TestResult> tests;
    std::vector<bool> corrected;
    std::string error;
  };
  std::vector<PairOutcome> pairs;
  for (size_t a = 0; a < stations.size(); ++a) {
    for (size_t b = a + 1; b < stations.size(); ++b) {
      pairs.push_back({static_cast<int>(a), static_cast<int>(b), {}, {}, {}});
    }
  }
  parallel_for(static_cast<int>(pairs.size()), o.workers, [&](int idx) {
    PairOutcome& pair = pairs[idx];
    try {
      pair.tests = test_eigenfunction_family(
          stations[pair.a].set.curves, stations[pair.b].set.curves, orders,
          deltas, o.alpha, nu, table);
      if (o.correction != "none") {
        std::vector<double> p_values;
        p_values.reserve(pair.tests.size());
        for (const TestResult& r : pair.tests) p_values.push_back(r.p_value);
        pair.corrected = o.correction == "holm" ? holm(p_values, o.alpha)
                                               : bonferroni(p_values, o.alpha);
      }
    } catch (const std::exception& e) {
      pair.error = e.what();
    }
  });

  json station_rows = json::array();
  for (const StationCurves& s : stations) {
    station_rows.push_back({{"file", s.file},
                            {"station", s.set.station},
                            {"years", s.set.years},
                            {"dropped", dropped_json(s.set)},
                            {"curves", s.set.curves.size()}});
  }
  json pair_rows = json::array();
  for (const PairOutcome& pair : pairs) {
    json row{{"x", stations[pair.a].set.station},
             {"y", stations[pair.b].set.station}};
    if (!pair.error.empty()) {
      row["error"] = pair.error;
    } else {
      json tests = json::array();
      for (const TestResult& r : pair.tests) tests.push_back(result_json(r));
      row["tests"] = tests;
      if (o.correction != "none") {
        row["correction"] = {{"method", o.correction},
                             {"reject", pair.corrected}};
      }
    }
    pair_rows.push_back(row);
  }

  json config = table_config_json(o.table, o.workers);
  config["files"] = o.files;
  config["orders"] = orders;
  config["deltas"] = deltas;
  config["alpha"] = o.alpha;
  config["correction"] = o.correction;
  config["detrend"] = !o.no_detrend;
  config["center"] = !o.no_center;
  const json ingest_config = ingest_config_json(o.ingest);
  for (const auto& [key, value] : ingest_config.items()) {
    if (key != "detrend") config[key] = value;
  }
  const json report{{"command", "analyze"},
                    {"format_version", kFormatVersion},
                    {"config", config},
                    {"table", table_info},
                    {"stations", station_rows},
                    {"failures", failures},
                    {"pairs", pair_rows}};
  emit_json(report, o.json_out);

  if (!o.csv_out.empty()) {
    std::ofstream csv(o.csv_out);
    if (!csv) throw data_error("cannot write " + o.csv_out);
    csv << "station_x,station_y,order,delta,d_hat,p_value,significant\n";
    char buf[64];
    for (const PairOutcome& pair : pairs) {
      if (!pair.error.empty()) continue;
      for (const TestResult& r : pair.tests) {
        csv << stations[pair.a].set.station << ','
            << stations[pair.b].set.station << ',' << r.j << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", r.delta);
        csv << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", r.d_hat);
        csv << buf << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", r.p_value);
        csv << buf << ',' << (r.p_value < r.alpha ? 1 : 0) << '\n';
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "self-normalized relevance tests for the covariance eigenstructure "
      "of functional samples"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "INI configuration file; command-line flags win");

  SimulateOpts sim_opts;
  CLI::App* sim =
      app.add_subcommand("simulate-null", "simulate and cache the null table");
  add_table_options(sim, sim_opts.table, true);
  sim->add_option("--workers", sim_opts.workers, "worker threads")
      ->capture_default_str();

  TestOpts test_opts;
  CLI::App* test = app.add_subcommand(
      "test", "relevance test between two curve files");
  test->add_option("--x", test_opts.x_file, "first curve file")->required();
  test->add_option("--y", test_opts.y_file, "second curve file")->required();
  test->add_option("--j", test_opts.j, "eigen order under test (1-based)")
      ->capture_default_str();
  test->add_option("--delta", test_opts.delta, "relevance margin")
      ->capture_default_str();
  test->add_option("--alpha", test_opts.alpha, "test level")
      ->capture_default_str();
  test->add_flag("--eigenvalue", test_opts.eigenvalue,
                 "test the eigenvalue instead of the eigenfunction");
  test->add_flag("--no-center", test_opts.no_center,
                 "skip centering each sample at its mean curve");
  add_table_options(test, test_opts.table, false);
  test->add_option("--workers", test_opts.workers, "worker threads")
      ->capture_default_str();
  test->add_option("--json-out", test_opts.json_out,
                   "report destination ('-' for stdout)")
      ->capture_default_str();

  PowerOpts power_opts;
  CLI::App* power = app.add_subcommand(
      "power", "Monte Carlo rejection rates over a phase grid");
  power->add_option("--scenario", power_opts.scenario, "1 or 2")->required();
  power->add_option("--deltas", power_opts.deltas, "phase grid (radians)")
      ->required()
      ->expected(-1);
  power->add_option("--m", power_opts.m, "first sample size")
      ->capture_default_str();
  power->add_option("--n", power_opts.n, "second sample size")
      ->capture_default_str();
  power->add_option("--replicates", power_opts.replicates,
                    "Monte Carlo replicates per grid point")
      ->capture_default_str();
  power->add_option("--j", power_opts.j,
                    "tested order; 0 picks the scenario default")
      ->capture_default_str();
  power->add_option("--delta-threshold", power_opts.delta_threshold,
                    "relevance margin")
      ->capture_default_str();
  power->add_option("--alpha", power_opts.alpha, "test level")
      ->capture_default_str();
  power->add_option("--tau", power_opts.tau, "population eigenvalues")
      ->expected(4);
  power->add_option("--rho", power_opts.rho, "AR(1) coefficient")
      ->capture_default_str();
  power->add_option("--burn-in", power_opts.burn_in, "AR(1) burn-in steps")
      ->capture_default_str();
  power->add_option("--grid-points", power_opts.grid_points,
                    "curve grid resolution")
      ->capture_default_str();
  power->add_option("--master-seed", power_opts.master_seed,
                    "master seed of the study")
      ->capture_default_str();
  add_table_options(power, power_opts.table, false);
  power->add_option("--workers", power_opts.workers, "worker threads")
      ->capture_default_str();
  power->add_option("--out", power_opts.out, "output CSV file")->required();

  IngestOpts ingest_opts;
  CLI::App* ingest = app.add_subcommand(
      "ingest", "convert a daily station CSV into a curve file");
  ingest->add_option("--input", ingest_opts.input, "daily station CSV")
      ->required();
  ingest->add_option("--out", ingest_opts.out, "output curve file")
      ->required();
  auto add_ingest_options = [](CLI::App* cmd, IngestOpts& o) {
    cmd->add_option("--year-col", o.year_col, "year column name")
        ->capture_default_str();
    cmd->add_option("--day-col", o.day_col, "day-of-year column name")
        ->capture_default_str();
    cmd->add_option("--value-col", o.value_col, "value column name")
        ->capture_default_str();
    cmd->add_option("--station-col", o.station_col,
                    "station column name (optional)");
    cmd->add_option("--delimiter", o.delimiter, "field delimiter")
        ->capture_default_str();
    cmd->add_option("--basis-size", o.basis_size,
                    "interior knots (or harmonics) of the smoothing basis")
        ->capture_default_str();
    cmd->add_option("--max-missing", o.max_missing,
                    "missing-day budget before a year is dropped")
        ->capture_default_str();
    cmd->add_option("--grid-points", o.grid_points, "curve grid resolution")
        ->capture_default_str();
    cmd->add_flag("--fourier", o.fourier,
                  "smooth with the fourier basis instead of b-splines");
  };
  add_ingest_options(ingest, ingest_opts);
  ingest->add_flag("--detrend", ingest_opts.detrend,
                   "remove the linear trend of yearly levels");

  AnalyzeOpts analyze_opts;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "pairwise relevance tests across station files");
  analyze->add_option("files", analyze_opts.files, "station CSV files")
      ->required()
      ->expected(-2);
  analyze->add_option("--orders", analyze_opts.orders,
                      "eigen orders to test (default 1)")
      ->expected(-1);
  analyze->add_option("--deltas", analyze_opts.deltas,
                      "relevance margins, one per order (default 0.1)")
      ->expected(-1);
  analyze->add_option("--alpha", analyze_opts.alpha, "test level")
      ->capture_default_str();
  analyze
      ->add_option("--correction", analyze_opts.correction,
                   "family-wise correction across orders within a pair")
      ->check(CLI::IsMember({"none", "bonferroni", "holm"}))
      ->capture_default_str();
  add_ingest_options(analyze, analyze_opts.ingest);
  analyze->add_flag("--no-detrend", analyze_opts.no_detrend,
                    "keep the linear trend of yearly levels");
  analyze->add_flag("--no-center", analyze_opts.no_center,
                    "skip centering each station at its mean curve");
  add_table_options(analyze, analyze_opts.table, false);
  analyze->add_option("--workers", analyze_opts.workers, "worker threads")
      ->capture_default_str();
  analyze->add_option("--csv", analyze_opts.csv_out, "write the pair table");
  analyze->add_option("--json-out", analyze_opts.json_out,
                      "report destination ('-' for stdout)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sim) return cmd_simulate_null(sim_opts);
    if (*test) return cmd_test(test_opts);
    if (*power) return cmd_power(power_opts);
    if (*ingest) return cmd_ingest(ingest_opts);
    if (*analyze) return cmd_analyze(analyze_opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
