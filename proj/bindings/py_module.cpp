// Python veneer over the library: sample construction, the null table, the
// relevance tests, the DGP, and the long-run variance diagnostic. Results
// cross the boundary as plain dicts; samples and tables stay opaque.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "eftest/covariance.hpp"
#include "eftest/dgp.hpp"
#include "eftest/errors.hpp"
#include "eftest/grid.hpp"
#include "eftest/longrun.hpp"
#include "eftest/multiplicity.hpp"
#include "eftest/null_law.hpp"
#include "eftest/nu_measure.hpp"
#include "eftest/selfnorm.hpp"

namespace py = pybind11;
using namespace eftest;

namespace {

CurveSample sample_from_rows(const std::vector<std::vector<double>>& rows,
                             const std::string& label) {
  if (rows.empty()) {
    throw std::invalid_argument("a sample needs at least two curves");
  }
  return CurveSample(Grid(static_cast<int>(rows.front().size())), rows, label);
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

py::dict result_dict(const TestResult& r) {
  py::dict d;
  d["kind"] = kind_name(r.kind);
  d["j"] = r.j;
  d["delta"] = r.delta;
  d["alpha"] = r.alpha;
  d["m"] = r.m;
  d["n"] = r.n;
  d["d_hat"] = r.d_hat;
  d["v_hat"] = r.v_hat;
  d["w_hat"] = r.w_hat;
  d["q_alpha"] = r.q_alpha;
  d["p_value"] = r.p_value;
  d["reject"] = r.reject;
  d["warnings"] = r.warnings;
  return d;
}

RelevanceTestConfig make_config(int j, double delta, double alpha,
                                double lower, int lambda_points) {
  RelevanceTestConfig cfg;
  cfg.j = j;
  cfg.delta = delta;
  cfg.alpha = alpha;
  cfg.nu = NuMeasure::uniform(lower, lambda_points);
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_eftest, m) {
  m.doc() =
      "self-normalized relevance tests for the covariance eigenstructure "
      "of functional samples";

  py::register_exception<data_error>(m, "DataError", PyExc_ValueError);
  py::register_exception<numeric_error>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<CurveSample>(m, "CurveSample")
      .def(py::init(&sample_from_rows), py::arg("rows"), py::arg("label") = "")
      .def_property_readonly("size", &CurveSample::size)
      .def_property_readonly(
          "grid_points",
          [](const CurveSample& s) { return s.grid().size(); })
      .def_property_readonly("label", &CurveSample::label)
      .def("rows", [](const CurveSample& s) { return s.rows(); })
      .def("__len__", &CurveSample::size);

  py::class_<QuantileTable>(m, "QuantileTable")
      .def_property_readonly("path_grid",
                             [](const QuantileTable& t) { return t.path_grid; })
      .def_property_readonly(
          "replicates", [](const QuantileTable& t) { return t.replicates; })
      .def_property_readonly("seed",
                             [](const QuantileTable& t) { return t.seed; })
      .def_property_readonly("redraws",
                             [](const QuantileTable& t) { return t.redraws; })
      .def_property_readonly("warnings",
                             [](const QuantileTable& t) { return t.warnings; });

  m.def("make_sample", &sample_from_rows, py::arg("rows"),
        py::arg("label") = "",
        "Curve sample from a list of equal-length rows (>= 16 points each).");
  m.def("center", &center, py::arg("sample"),
        "Subtract the pointwise mean curve.");

  m.def(
      "simulate_table",
      [](int paths, std::int64_t replicates, std::uint64_t seed, double lower,
         int lambda_points, int workers) {
        return simulate_w_table(NuMeasure::uniform(lower, lambda_points),
                                paths, replicates, seed, workers);
      },
      py::arg("paths") = 1000, py::arg("replicates") = 100000,
      py::arg("seed") = 20240101, py::arg("lower") = 0.1,
      py::arg("lambda_points") = 91, py::arg("workers") = 1,
      "Monte Carlo table of the pivotal null statistic.");
  m.def("quantile", &quantile, py::arg("table"), py::arg("p"));
  m.def("p_value", &p_value, py::arg("table"), py::arg("w"));

  m.def(
      "eigenvalues",
      [](const CurveSample& s, int count) {
        return sample_eigensystem(s, s.size(), count).eigenvalues;
      },
      py::arg("sample"), py::arg("count") = 4,
      "Leading eigenvalues of the sample covariance operator.");
  m.def(
      "eigenfunction",
      [](const CurveSample& s, int j) {
        return sample_eigensystem(s, s.size(), j).eigenfunction(j);
      },
      py::arg("sample"), py::arg("j") = 1,
      "The j-th sample eigenfunction (canonical sign) on the grid.");

  m.def("dhat_distance", &dhat_distance, py::arg("x"), py::arg("y"),
        py::arg("j") = 1,
        "Squared distance between aligned j-th eigenfunctions.");
  m.def(
      "vhat",
      [](const CurveSample& x, const CurveSample& y, int j, double lower,
         int lambda_points) {
        return vhat(x, y, j, NuMeasure::uniform(lower, lambda_points));
      },
      py::arg("x"), py::arg("y"), py::arg("j") = 1, py::arg("lower") = 0.1,
      py::arg("lambda_points") = 91, "Self-normalizer of the distance process.");

  m.def(
      "test_eigenfunction",
      [](const CurveSample& x, const CurveSample& y, const QuantileTable& table,
         int j, double delta, double alpha, double lower, int lambda_points) {
        return result_dict(test_eigenfunction(
            x, y, make_config(j, delta, alpha, lower, lambda_points), table));
      },
      py::arg("x"), py::arg("y"), py::arg("table"), py::arg("j") = 1,
      py::arg("delta") = 0.1, py::arg("alpha") = 0.05, py::arg("lower") = 0.1,
      py::arg("lambda_points") = 91,
      "Self-normalized relevance test for the j-th eigenfunction.");
  m.def(
      "test_eigenvalue",
      [](const CurveSample& x, const CurveSample& y, const QuantileTable& table,
         int j, double delta, double alpha, double lower, int lambda_points) {
        return result_dict(test_eigenvalue(
            x, y, make_config(j, delta, alpha, lower, lambda_points), table));
      },
      py::arg("x"), py::arg("y"), py::arg("table"), py::arg("j") = 1,
      py::arg("delta") = 0.1, py::arg("alpha") = 0.05, py::arg("lower") = 0.1,
      py::arg("lambda_points") = 91,
      "Self-normalized relevance test for the j-th eigenvalue.");

  m.def("bonferroni", &bonferroni, py::arg("p_values"), py::arg("alpha") = 0.05);
  m.def("holm", &holm, py::arg("p_values"), py::arg("alpha") = 0.05);

  m.def(
      "simulate_sample",
      [](int count, double delta1, double delta2, int grid_points,
         std::uint64_t seed, std::uint64_t stream, double rho,
         const std::array<double, 4>& tau, int burn_in,
         const std::string& label) {
        DgpConfig config;
        config.m = count;
        config.delta1 = delta1;
        config.delta2 = delta2;
        config.grid_points = grid_points;
        config.seed = seed;
        config.stream = stream;
        config.rho = rho;
        config.tau = tau;
        config.burn_in = burn_in;
        config.label = label;
        return simulate_sample(config);
      },
      py::arg("count") = 100, py::arg("delta1") = 0.0, py::arg("delta2") = 0.0,
      py::arg("grid_points") = 201, py::arg("seed") = 0, py::arg("stream") = 0,
      py::arg("rho") = 0.5,
      py::arg("tau") = std::array<double, 4>{8.0, 4.0, 0.5, 0.3},
      py::arg("burn_in") = 30, py::arg("label") = "dgp",
      "Four-component Fourier sample with an AR(1) coefficient process.");
  m.def("phase_to_distance", &phase_to_distance, py::arg("delta"),
        "Squared distance between unit Fourier pairs at phases delta and 0.");

  m.def(
      "estimate_zeta",
      [](const CurveSample& x, const CurveSample& y, int j, int K,
         int bandwidth) {
        const LrvEstimate e = estimate_zeta(x, y, j, K, bandwidth);
        py::dict d;
        d["sigma2_x"] = e.sigma2_x;
        d["sigma2_y"] = e.sigma2_y;
        d["theta"] = e.theta;
        d["zeta"] = e.zeta;
        d["truncation"] = e.truncation;
        d["bandwidth"] = e.bandwidth;
        d["warnings"] = e.warnings;
        return d;
      },
      py::arg("x"), py::arg("y"), py::arg("j") = 1, py::arg("K") = 0,
      py::arg("bandwidth") = 0,
      "Plug-in long-run standard deviation of the distance statistic.");
  m.def(
      "test_lrv_plugin",
      [](const CurveSample& x, const CurveSample& y, int j, double delta,
         double alpha, int K, int bandwidth) {
        const LrvEstimate lrv = estimate_zeta(x, y, j, K, bandwidth);
        return result_dict(test_lrv_plugin(
            x, y, make_config(j, delta, alpha, 0.1, 91), lrv));
      },
      py::arg("x"), py::arg("y"), py::arg("j") = 1, py::arg("delta") = 0.1,
      py::arg("alpha") = 0.05, py::arg("K") = 0, py::arg("bandwidth") = 0,
      "Diagnostic z-test using the plug-in long-run variance.");
}
