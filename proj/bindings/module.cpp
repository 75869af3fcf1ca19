// Python bindings for the core operations: meshes, spectra, scalar modal
// analysis, time stepping, and error tables.
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "numerovlab/analysis.hpp"
#include "numerovlab/config.hpp"
#include "numerovlab/mesh.hpp"
#include "numerovlab/modal.hpp"
#include "numerovlab/operators.hpp"
#include "numerovlab/reference.hpp"
#include "numerovlab/scheme.hpp"
#include "numerovlab/spectral.hpp"

namespace py = pybind11;
using namespace nlab;

namespace {

py::dict spectrum_dict(const Spectrum& spec) {
  py::list lambdas, residuals;
  for (const EigenPair& p : spec.pairs) {
    lambdas.append(p.lambda);
    residuals.append(p.residual);
  }
  py::dict d;
  d["lambdas"] = lambdas;
  d["residuals"] = residuals;
  d["classification"] =
      spec.classification == SpectrumClass::ComplexPresent ? "complex_present" : "all_real";
  d["dominant"] = spec.dominant_pair().lambda;
  py::list vec;
  for (const std::complex<double>& z : spec.dominant_pair().vector) vec.append(z);
  d["dominant_vector"] = vec;
  return d;
}

py::dict run_dict(const Mesh& mesh, const RunResult<double>& run) {
  py::dict d;
  d["final"] = run.final_state.curr;
  d["overflowed"] = run.overflowed;
  d["completed_steps"] = run.completed_steps;
  py::list norms;
  for (const NormHistoryRow& r : run.norm_history) {
    py::dict row;
    row["m"] = r.level;
    row["t"] = r.time;
    row["l2h"] = r.l2h;
    row["dirichlet"] = r.dirichlet;
    norms.append(row);
  }
  d["norms"] = norms;
  py::list xs;
  for (double x : mesh.nodes()) xs.append(x);
  d["nodes"] = xs;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "compact wave scheme laboratory (core operations)";

  py::class_<Mesh>(m, "Mesh")
      .def_static(
          "uniform",
          [](const std::string& X, long long n) { return Mesh::uniform(parse_rational(X), n); },
          py::arg("X"), py::arg("intervals"))
      .def_static(
          "from_steps",
          [](std::vector<long long> numerators, long long denominator, const std::string& X) {
            return Mesh::from_steps(std::move(numerators), denominator, parse_rational(X));
          },
          py::arg("numerators"), py::arg("denominator"), py::arg("X") = "1")
      .def_static("parse", [](const std::string& text) { return Mesh::parse(text); })
      .def_static("load", [](const std::string& path) { return Mesh::load(path); })
      .def("serialize", &Mesh::serialize)
      .def("save", [](const Mesh& mesh, const std::string& path) { mesh.save(path); })
      .def_property_readonly("intervals", &Mesh::intervals)
      .def_property_readonly("interior_count", &Mesh::interior_count)
      .def_property_readonly("length", [](const Mesh& mesh) { return to_double(mesh.length()); })
      .def_property_readonly("nodes",
                             [](const Mesh& mesh) {
                               const auto& xs = mesh.nodes();
                               return std::vector<double>(xs.begin(), xs.end());
                             })
      .def_property_readonly("steps",
                             [](const Mesh& mesh) {
                               const auto& hs = mesh.steps();
                               return std::vector<double>(hs.begin(), hs.end());
                             })
      .def_property_readonly("is_uniform", &Mesh::is_uniform)
      .def_property_readonly("min_step",
                             [](const Mesh& mesh) { return to_double(mesh.min_step()); })
      .def_property_readonly("max_step",
                             [](const Mesh& mesh) { return to_double(mesh.max_step()); })
      .def("extend", [](const Mesh& mesh, int K) { return extend_mesh(mesh, K); }, py::arg("K"))
      .def("__eq__", [](const Mesh& a, const Mesh& b) { return a == b; })
      .def("__repr__", [](const Mesh& mesh) {
        return "<Mesh intervals=" + std::to_string(mesh.intervals()) + ">";
      });

  m.def(
      "step_ratio_range",
      [](const Mesh& mesh) {
        const StepRatioRange r = step_ratio_range(mesh);
        return py::make_tuple(to_double(r.min_ratio), to_double(r.max_ratio), r.within_band);
      },
      py::arg("mesh"), "min/max consecutive step ratio and the golden-band flag");

  m.def("spectrum", [](const Mesh& mesh) { return spectrum_dict(generalized_spectrum(mesh)); },
        py::arg("mesh"), "eigenvalues of the mesh pencil, dominant first");
  m.def("charpoly_roots", [](const Mesh& mesh) { return charpoly_roots_oracle(mesh); },
        py::arg("mesh"), "independent characteristic-polynomial roots (N <= 16)");
  m.def(
      "growth_rate",
      [](std::complex<double> lambda, double a) { return growth_rate(lambda, a); },
      py::arg("lambda_"), py::arg("a") = 1.0, "kappa0 = (a/sqrt(2)) sqrt(|lambda| - Re lambda)");

  m.def(
      "amplification",
      [](std::complex<double> lambda, double tau, double a, double sigma) {
        const AmplificationResult r = amplification({lambda, tau, a, sigma});
        py::dict d;
        d["mu"] = r.mu;
        d["q"] = r.q;
        d["q_inv"] = r.q_inv;
        d["abs_q"] = r.abs_q;
        d["degenerate"] = r.degenerate;
        return d;
      },
      py::arg("lambda_"), py::arg("tau"), py::arg("a") = 1.0,
      py::arg("sigma") = 1.0 / 12.0, "scalar amplification roots for one eigenvalue");

  m.def(
      "necessary_conditions",
      [](std::complex<double> lambda, double tau, double a, double sigma, double kappa) {
        const NecessaryConditions c = necessary_conditions({lambda, tau, a, sigma}, kappa);
        const auto pack = [](const ConditionCheck& chk) {
          py::dict d;
          d["lhs"] = chk.lhs;
          d["rhs"] = chk.rhs;
          d["pass"] = chk.pass;
          d["margin"] = chk.margin;
          return d;
        };
        py::dict d;
        d["magnitude"] = pack(c.magnitude);
        d["imaginary"] = pack(c.imaginary);
        d["spectral"] = pack(c.spectral);
        d["all_pass"] = c.all_pass;
        return d;
      },
      py::arg("lambda_"), py::arg("tau"), py::arg("a") = 1.0, py::arg("sigma") = 1.0 / 12.0,
      py::arg("kappa") = 0.0, "necessary stability conditions at one eigenvalue");

  m.def(
      "run_scheme",
      [](const Mesh& mesh, std::vector<double> v0, std::vector<double> u1, double tau,
         long long steps, double a, double sigma) {
        const CompactWaveScheme scheme(mesh, {a, tau, steps, sigma});
        RunOptions options;
        const RunResult<double> run =
            scheme.run(std::span<const double>(v0), std::span<const double>(u1), options);
        return run_dict(mesh, run);
      },
      py::arg("mesh"), py::arg("v0"), py::arg("u1"), py::arg("tau"), py::arg("steps"),
      py::arg("a") = 1.0, py::arg("sigma") = 1.0 / 12.0,
      "time-step the scheme from interior values v0 and velocity data u1");

  m.def(
      "bump_experiment",
      [](const Mesh& base, int K, double T, double tau_request, std::optional<long long> fixed_M,
         double a, double sigma) {
        ExperimentSetup setup;
        setup.a = a;
        setup.sigma = sigma;
        setup.fixed_steps = fixed_M;
        const TauRule rule = TauRule::fixed(tau_request);
        const std::vector<int> multiplicities{K};
        const std::vector<double> horizons{T};
        const ErrorTable table = error_table(base, multiplicities, rule, horizons, setup);
        const ErrorRow& row = table.rows.front();
        py::dict d;
        d["K"] = row.multiplicity;
        d["T"] = row.horizon;
        d["tau"] = row.tau;
        d["M"] = row.steps;
        d["error"] = row.error;
        return d;
      },
      py::arg("base"), py::arg("K"), py::arg("T"), py::arg("tau"),
      py::arg("fixed_M") = std::nullopt, py::arg("a") = 1.0, py::arg("sigma") = 1.0 / 12.0,
      "one error-table entry for the smooth-bump experiment");

  m.def("quartic_bump", [](double x) { return quartic_bump(x); }, py::arg("x"),
        "standard initial profile exp(-(10(x-1/2))^4)");
}
