#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"
#include "locc/bounds.hpp"
#include "locc/entangle.hpp"
#include "locc/error.hpp"
#include "locc/io.hpp"
#include "locc/states.hpp"
#include "locc/verify.hpp"

namespace py = pybind11;
using namespace locc;

namespace {

py::dict to_dict(const io::FlatReport& r) {
  py::dict d;
  for (const auto& [key, value] : r.entries()) {
    std::visit([&](const auto& v) { d[py::str(key)] = v; }, value);
  }
  return d;
}

Ensemble ensemble_from_string(const std::string& text) {
  return io::ensemble_from_json(io::json::parse(text));
}

Bipartition cut_of(const std::vector<int>& left) { return Bipartition{left.empty() ? std::vector<int>{0} : left}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Locally accessible information bounds for bipartite ensembles";

  // Translators run newest first, so the base class is registered first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  py::class_<Ensemble>(m, "Ensemble")
      .def_static("from_json", &ensemble_from_string, py::arg("text"))
      .def("to_json", [](const Ensemble& e) { return io::ensemble_to_json(e).dump(); })
      .def_property_readonly("dims", &Ensemble::dims)
      .def_property_readonly("probabilities", &Ensemble::probabilities)
      .def_property_readonly("labels", &Ensemble::labels)
      .def_property_readonly("states",
                             [](const Ensemble& e) {
                               std::vector<CMatrix> out;
                               for (const auto& item : e.items()) out.push_back(item.state.mat());
                               return out;
                             })
      .def("__len__", &Ensemble::size);

  m.def(
      "build_ensemble",
      [](const std::string& family, std::optional<int> d, std::vector<double> a1, std::vector<double> priors) {
        EnsembleSpec spec;
        spec.family = family_from_string(family);
        spec.d = d;
        spec.a1 = std::move(a1);
        spec.priors = std::move(priors);
        return build_ensemble(spec);
      },
      py::arg("family"), py::arg("d") = py::none(), py::arg("a1") = std::vector<double>{},
      py::arg("priors") = std::vector<double>{});

  m.def("holevo_chi", &holevo_chi, py::arg("ensemble"));
  m.def(
      "bounds", [](const Ensemble& e) { return to_dict(io::flatten(theorem_bound(e))); }, py::arg("ensemble"));
  m.def(
      "simulate",
      [](const Ensemble& e, const std::string& protocol) {
        const ProtocolTree t = io::protocol_from_json(io::json::parse(protocol));
        io::FlatReport r = io::flatten(run_protocol(e, t));
        r.merge("bounds.", io::flatten(verify_protocol_against_bounds(e, t)));
        return to_dict(r);
      },
      py::arg("ensemble"), py::arg("protocol"));

  m.def(
      "ree",
      [](const CMatrix& rho, const Dims& dims, const std::vector<int>& left) {
        return to_dict(io::flatten(ree(DensityMatrix(rho, dims), cut_of(left))));
      },
      py::arg("rho"), py::arg("dims"), py::arg("left") = std::vector<int>{0});
  m.def(
      "negativity",
      [](const CMatrix& rho, const Dims& dims, const std::vector<int>& left) {
        return negativity(DensityMatrix(rho, dims), cut_of(left));
      },
      py::arg("rho"), py::arg("dims"), py::arg("left") = std::vector<int>{0});
  m.def(
      "concurrence", [](const CMatrix& rho) { return concurrence_2q(DensityMatrix(rho, {2, 2})); }, py::arg("rho"));
  m.def("eof_from_concurrence", &eof_from_concurrence, py::arg("c"));

  m.def("suite_names", &suite_names);
  m.def(
      "run_suite",
      [](const std::string& name, std::uint64_t seed, std::size_t trials) {
        const SuiteResult r = run_suite(name, seed, trials);
        py::dict d;
        d["name"] = r.name;
        d["trials"] = r.trials;
        d["failures"] = r.failures;
        d["max_excess"] = r.max_excess;
        d["failing_trials"] = r.failing_trials;
        d["pass"] = r.pass();
        return d;
      },
      py::arg("name"), py::arg("seed") = 20030415, py::arg("trials") = 0);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs locc-info with the given arguments; returns (exit_code, stdout, stderr).");
}
