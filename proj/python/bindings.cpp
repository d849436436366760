#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "isocone/cli.hpp"
#include "isocone/errors.hpp"
#include "isocone/invariance.hpp"
#include "isocone/io.hpp"
#include "isocone/latops.hpp"
#include "isocone/projection.hpp"

namespace py = pybind11;
using namespace isocone;

namespace {

// Reports cross the boundary as Python dicts, in the same shape the CLI writes.
py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

CheckOptions options(std::uint64_t seed, std::size_t samples, double eps_abs, double eps_rel) {
  CheckOptions opt;
  opt.seed = seed;
  opt.samples = samples;
  opt.tol = {eps_abs, eps_rel};
  return opt;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Projections onto convex cones, lattice-like operations and invariance checks";
  m.attr("__version__") = ISOCONE_VERSION;

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<DimensionError>(m, "DimensionError", error.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<Unsupported>(m, "Unsupported", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<NumericError>(m, "NumericError", error.ptr());

  py::class_<Cone>(m, "Cone")
      .def_static("orthant", &Cone::orthant, py::arg("dim"))
      .def_static("lorentz", &Cone::lorentz, py::arg("dim"))
      .def_static("simplicial", &Cone::simplicial, py::arg("generators"))
      .def_static("generators", [](Matrix g) { return Cone::generators(std::move(g)); }, py::arg("generators"))
      .def_static("facets", &Cone::facets, py::arg("normals"))
      .def_static("from_json", [](const std::string& s) { return parse_cone(Json::parse(s)); })
      .def_property_readonly("kind", [](const Cone& k) { return std::string(to_string(k.kind())); })
      .def_property_readonly("dim", &Cone::dim)
      .def("to_json", [](const Cone& k) { return to_json(k).dump(); })
      .def("contains", [](const Cone& k, const Vector& x) { return in_cone(k, x); }, py::arg("x"))
      .def("__repr__", [](const Cone& k) { return "Cone(" + to_json(k).dump() + ")"; });

  m.def("dual_cone", &dual_cone, py::arg("cone"));
  m.def("project_cone", &project_cone, py::arg("cone"), py::arg("x"));
  m.def("project_cone_oracle", &project_cone_oracle, py::arg("cone"), py::arg("x"));
  m.def(
      "moreau_decompose",
      [](const Cone& k, const Vector& x) {
        const MoreauPair mp = moreau_decompose(k, x);
        return py::make_tuple(mp.p, mp.q);
      },
      py::arg("cone"), py::arg("x"));

  py::class_<LatticeLikeOps>(m, "LatticeLikeOps")
      .def(py::init<Cone, double>(), py::arg("cone"), py::arg("path_tolerance") = 1e-9)
      .def("meet", &LatticeLikeOps::meet, py::arg("x"), py::arg("y"))
      .def("join", &LatticeLikeOps::join, py::arg("x"), py::arg("y"))
      .def("meet_star", &LatticeLikeOps::meet_star, py::arg("x"), py::arg("y"))
      .def("join_star", &LatticeLikeOps::join_star, py::arg("x"), py::arg("y"))
      .def(
          "apply",
          [](const LatticeLikeOps& ops, const std::string& op, const Vector& x, const Vector& y) {
            const auto parsed = parse_latop(op);
            if (!parsed) throw InvalidArgument("unknown operation '" + op + "'");
            return ops.apply(*parsed, x, y);
          },
          py::arg("op"), py::arg("x"), py::arg("y"));

  // Sets are passed as their JSON descriptions.
  auto set_of = [](const std::string& s) { return parse_set(Json::parse(s)); };

  m.def(
      "classify_normal",
      [](const Cone& k, const Vector& a, double tol) { return to_python(to_json(classify_normal(k, a, tol))); },
      py::arg("cone"), py::arg("normal"), py::arg("tol") = 1e-9);
  m.def(
      "hyperplane_invariant_simplicial",
      [](const Cone& k, const Vector& a) { return hyperplane_invariant_simplicial(k, a); }, py::arg("cone"),
      py::arg("normal"));
  m.def(
      "enumerate_invariant_normals",
      [](const Cone& k) {
        Json list = Json::array();
        for (const NormalFamily& f : enumerate_invariant_normals(k)) list.push_back(to_json(f));
        return to_python(list);
      },
      py::arg("cone"));

  m.def(
      "set_invariant",
      [set_of](const std::string& s, const Cone& k, std::uint64_t seed, std::size_t samples, double ea, double er) {
        return to_python(to_json(set_invariant(set_of(s), k, options(seed, samples, ea, er))));
      },
      py::arg("set_json"), py::arg("cone"), py::arg("seed") = 0, py::arg("samples") = 1000, py::arg("eps_abs") = 1e-9,
      py::arg("eps_rel") = 1e-12);
  m.def(
      "isotone_test",
      [set_of](const std::string& s, const Cone& k, std::uint64_t seed, std::size_t samples, double ea, double er) {
        return to_python(to_json(isotone_test(set_of(s), k, options(seed, samples, ea, er))));
      },
      py::arg("set_json"), py::arg("cone"), py::arg("seed") = 0, py::arg("samples") = 1000, py::arg("eps_abs") = 1e-9,
      py::arg("eps_rel") = 1e-12);
  m.def(
      "sublattice_test",
      [set_of](const std::string& s, const Cone& k, std::uint64_t seed, std::size_t samples, double ea, double er) {
        return to_python(to_json(sublattice_test(set_of(s), k, options(seed, samples, ea, er))));
      },
      py::arg("set_json"), py::arg("cone"), py::arg("seed") = 0, py::arg("samples") = 1000, py::arg("eps_abs") = 1e-9,
      py::arg("eps_rel") = 1e-12);
  m.def(
      "lorentz_product_check",
      [set_of](const std::string& s, std::uint64_t seed, std::size_t samples, double ea, double er) {
        return to_python(to_json(lorentz_product_check(set_of(s), options(seed, samples, ea, er))));
      },
      py::arg("set_json"), py::arg("seed") = 0, py::arg("samples") = 1000, py::arg("eps_abs") = 1e-9,
      py::arg("eps_rel") = 1e-12);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
