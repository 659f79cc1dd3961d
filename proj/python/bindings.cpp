#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "manifold_approx/codec.hpp"
#include "manifold_approx/errors.hpp"
#include "manifold_approx/estimator.hpp"
#include "manifold_approx/experiments.hpp"
#include "manifold_approx/kernel.hpp"
#include "manifold_approx/numerics.hpp"

namespace py = pybind11;
using namespace mfa;

namespace {

std::vector<double> as_point(const Eigen::Ref<const Eigen::VectorXd>& x) {
  return {x.data(), x.data() + x.size()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Localized spherical-polynomial kernels for approximation on data-defined manifolds";

  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<DegenerateDenominatorError>(m, "DegenerateDenominatorError", numerical);

  m.def("surface_volume", &surface_volume, py::arg("q"));
  m.def("surface_volume_ratio", &surface_volume_ratio, py::arg("q"));
  m.def("ultra_at_one", &ultra_at_one, py::arg("q"), py::arg("n"));
  m.def("cutoff", py::vectorize(&cutoff_eval), py::arg("t"));

  py::class_<UltrasphericalFamily>(m, "UltrasphericalFamily")
      .def(py::init<int, int>(), py::arg("q"), py::arg("cached_degree") = 64)
      .def_property_readonly("q", &UltrasphericalFamily::dimension)
      .def_property_readonly("seed", &UltrasphericalFamily::seed)
      .def("recurrence", &UltrasphericalFamily::recurrence, py::arg("l"))
      .def("eval_batch", &UltrasphericalFamily::eval_batch, py::arg("nmax"), py::arg("t"))
      .def("eval", &UltrasphericalFamily::eval, py::arg("n"), py::arg("t"));

  m.def(
      "gauss_jacobi_rule",
      [](int q, int m) {
        QuadratureRule r = gauss_jacobi_rule(q, m);
        return py::make_tuple(py::array(py::cast(r.nodes)), py::array(py::cast(r.weights)));
      },
      py::arg("q"), py::arg("m"), "Nodes and weights of the m-point Gauss rule.");

  py::class_<LocalizedKernel>(m, "LocalizedKernel")
      .def(py::init<int, int>(), py::arg("n"), py::arg("q"))
      .def_property_readonly("n", &LocalizedKernel::degree_bound)
      .def_property_readonly("q", &LocalizedKernel::dimension)
      .def_property_readonly("peak", &LocalizedKernel::peak)
      .def_property_readonly("coefficients",
                             [](const LocalizedKernel& k) {
                               auto c = k.coefficients();
                               return std::vector<double>(c.begin(), c.end());
                             })
      .def("__call__", [](const LocalizedKernel& k, double t) { return k(t); }, py::arg("t"))
      .def(
          "__call__",
          [](const LocalizedKernel& k, py::array_t<double> t) {
            return py::vectorize([&k](double v) { return k(v); })(t);
          },
          py::arg("t"))
      .def("profile", [](const LocalizedKernel& k, std::vector<double> angles) {
        return kernel_profile(k, angles);
      });

  py::class_<LabeledDataset>(m, "LabeledDataset")
      .def(py::init<RowMatrix, RowMatrix>(), py::arg("points"), py::arg("labels"))
      .def_static("unlabeled", &LabeledDataset::unlabeled, py::arg("points"))
      .def("__len__", &LabeledDataset::size)
      .def_property_readonly("ambient_dimension", &LabeledDataset::ambient_dimension)
      .def_property_readonly("points", &LabeledDataset::points)
      .def_property_readonly("labels", &LabeledDataset::labels);

  m.def(
      "f_hat",
      [](const LabeledDataset& d, const LocalizedKernel& k, const Eigen::VectorXd& x) {
        return f_hat(d, {k, false}, as_point(x));
      },
      py::arg("data"), py::arg("kernel"), py::arg("x"));
  m.def(
      "quotient_estimate",
      [](const LabeledDataset& d, const LocalizedKernel& k, const Eigen::VectorXd& x) {
        return quotient_estimate(d, {k, true}, as_point(x));
      },
      py::arg("data"), py::arg("kernel"), py::arg("x"));
  m.def(
      "density_estimate",
      [](const LabeledDataset& d, const LocalizedKernel& k, const Eigen::VectorXd& x) {
        return density_estimate(d, {k, false}, as_point(x));
      },
      py::arg("data"), py::arg("kernel"), py::arg("x"));
  m.def(
      "estimate_grid",
      [](const LabeledDataset& d, const LocalizedKernel& k, const RowMatrix& xs, bool normalize,
         unsigned threads) {
        py::gil_scoped_release release;
        return estimate_grid(d, {k, normalize}, xs, threads).values;
      },
      py::arg("data"), py::arg("kernel"), py::arg("xs"), py::arg("normalize") = false,
      py::arg("threads") = 0, "Estimates at each row of xs; degenerate quotient rows are NaN.");

  py::class_<HarmonicBasis>(m, "HarmonicBasis")
      .def(py::init<int>(), py::arg("max_degree"))
      .def("eval", [](const HarmonicBasis& b, const Eigen::Vector3d& x, int degrees) {
        return b.eval(as_point(x), degrees);
      });
  py::class_<HarmonicEncoding>(m, "HarmonicEncoding")
      .def_readonly("degrees", &HarmonicEncoding::degrees)
      .def_readonly("samples", &HarmonicEncoding::samples)
      .def_readonly("coefficients", &HarmonicEncoding::coefficients);
  py::class_<GammaTable>(m, "GammaTable").def_readonly("values", &GammaTable::values);

  m.def("encode", &encode, py::arg("data"), py::arg("basis"), py::arg("L"));
  m.def("gamma_coeffs", &gamma_coeffs, py::arg("n"), py::arg("q"), py::arg("ambient") = 2);
  m.def(
      "decode",
      [](const HarmonicEncoding& e, const GammaTable& g, const HarmonicBasis& b,
         const Eigen::Vector3d& x) { return decode(e, g, b, as_point(x)); },
      py::arg("encoding"), py::arg("gamma"), py::arg("basis"), py::arg("x"));
  m.def(
      "encoding_to_json",
      [](const HarmonicEncoding& e, int q, int n) { return to_json({2, q, n, e}); },
      py::arg("encoding"), py::arg("q"), py::arg("n"));
  m.def(
      "encoding_from_json",
      [](const std::string& text) {
        EncodingDocument d = encoding_from_json(text);
        return py::make_tuple(d.encoding, d.q, d.n);
      },
      py::arg("text"), "Returns (encoding, q, n).");

  m.def(
      "run_ellipse",
      [](int n, long long M, std::optional<double> snr_db, std::uint64_t seed, int grid,
         unsigned threads) {
        EllipseConfig c;
        c.n = n;
        c.M = M;
        c.snr_db = snr_db;
        c.seed = seed;
        c.grid = grid;
        EllipseRun r;
        {
          py::gil_scoped_release release;
          r = run_ellipse(c, threads);
        }
        py::dict out;
        out["thetas"] = r.thetas;
        out["truth"] = r.truth;
        out["estimates"] = r.estimates;
        out["errors"] = r.errors;
        out["skipped"] = r.skipped;
        return out;
      },
      py::arg("n"), py::arg("M"), py::arg("snr_db") = py::none(), py::arg("seed") = 0,
      py::arg("grid") = 1024, py::arg("threads") = 0);

  m.def(
      "run_biexp",
      [](int n, long long M, std::optional<double> snr_db, std::uint64_t seed, int tests,
         unsigned threads) {
        BiexpConfig c;
        c.n = n;
        c.M = M;
        c.snr_db = snr_db;
        c.seed = seed;
        c.tests = tests;
        BiexpRun r;
        {
          py::gil_scoped_release release;
          r = run_biexp(c, threads);
        }
        py::dict out;
        out["truth"] = r.truth;
        out["estimates"] = r.estimates;
        out["errors"] = r.errors;
        out["skipped"] = r.skipped;
        return out;
      },
      py::arg("n"), py::arg("M"), py::arg("snr_db") = py::none(), py::arg("seed") = 0,
      py::arg("tests") = 512, py::arg("threads") = 0);

  m.def("ellipse_point", &ellipse_point, py::arg("theta"));
  m.def("ellipse_target", py::vectorize(&ellipse_target), py::arg("theta"));
}
