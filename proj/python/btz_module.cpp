#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "btz/error.hpp"
#include "btz/generators.hpp"
#include "btz/operators.hpp"
#include "btz/pipeline.hpp"
#include "btz/zeta.hpp"

namespace py = pybind11;
using namespace btz;

namespace {

// nlohmann -> Python through the json module; big integers stay strings.
py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_py(const py::object& o) { return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>()); }

py::object poly_py(const IntPolynomial& p) { return to_py(to_json(p)); }

py::dict matrix_py(const SparseIntMatrix& m) {
  py::list triplets;
  for (const auto& e : m.entries) triplets.append(py::make_tuple(e.row, e.col, e.value));
  py::dict d;
  d["dim"] = m.dim;
  d["triplets"] = triplets;
  return d;
}

py::dict class_py(const GeodesicClass& g) {
  py::dict d;
  d["kind"] = to_string(g.kind);
  d["length"] = g.length;
  d["primitive_length"] = g.primitive_length;
  d["power"] = g.power;
  d["representative"] = g.representative;
  return d;
}

RationalFn ratio_arg(const py::object& o) {
  if (py::isinstance<py::str>(o)) return rational_from_json(Json::parse(o.cast<std::string>()));
  return rational_from_json(from_py(o));
}

std::vector<GaussRational> character_arg(const std::vector<py::object>& values) {
  std::vector<GaussRational> out;
  for (const auto& v : values) {
    if (py::isinstance<py::int_>(v)) {
      out.emplace_back(parse_bigrational(py::str(v).cast<std::string>()));
    } else {
      out.push_back(parse_gauss_rational(py::str(v).cast<std::string>()));
    }
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(btz, m) {
  m.doc() = "Geometric zeta functions of finite typed 2-complexes";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);

  py::class_<TypedComplex>(m, "Complex")
      .def_property_readonly("counts",
                             [](const TypedComplex& c) {
                               const auto s = simplex_counts(c);
                               return py::make_tuple(s.n0, s.n1, s.n2);
                             })
      .def_property_readonly("chi", &euler_characteristic)
      .def_property_readonly("q", [](const TypedComplex& c) { return c.q; })
      .def_property_readonly("has_boundary", &TypedComplex::has_boundary)
      .def("validate",
           [](const TypedComplex& c) {
             py::list out;
             for (const auto& v : validate_complex(c).violations) out.append(py::make_tuple(v.kind, v.message));
             return out;
           },
           "List of (kind, message) violations; empty when valid.")
      .def("save", &save_complex)
      .def("__eq__", [](const TypedComplex& a, const TypedComplex& b) { return a == b; })
      .def("__repr__", [](const TypedComplex& c) {
        const auto s = simplex_counts(c);
        return "<btz.Complex " + std::to_string(s.n0) + "/" + std::to_string(s.n1) + "/" +
               std::to_string(s.n2) + ">";
      });

  py::class_<TorusGeometry>(m, "TorusGeometry")
      .def_property_readonly("coords", [](const TorusGeometry& g) { return g.coords; })
      .def("save", [](const TorusGeometry& g) { return save_geometry(g); });

  m.def("load_complex", &load_complex_text, py::arg("text"));
  m.def("load_complex_file", &load_complex_file, py::arg("path"));
  m.def("load_torus_geometry", [](const std::string& text) { return load_torus_geometry(text); },
        py::arg("text"));

  m.def(
      "gen_torus",
      [](std::array<std::int64_t, 2> c0, std::array<std::int64_t, 2> c1) {
        auto t = gen_apartment_torus(ApartmentSpec::from_columns(c0, c1));
        return py::make_tuple(t.complex, t.geometry);
      },
      py::arg("col0"), py::arg("col1"), "Apartment torus; returns (Complex, TorusGeometry).");
  m.def(
      "gen_ball",
      [](std::int64_t q, int radius, int center_type) {
        return gen_building_ball({q, radius, center_type}).complex;
      },
      py::arg("q"), py::arg("radius") = 1, py::arg("center_type") = 0);
  m.def("gen_cycle", &gen_cycle_complex, py::arg("n"));

  m.def("edge_operator", [](const TypedComplex& c) { return matrix_py(build_edge_operator(c)); });
  m.def("chamber_operator", [](const TypedComplex& c) { return matrix_py(build_chamber_operator(c)); });

  m.def("zeta_edge", [](const TypedComplex& c) { return poly_py(zeta_edge(c)); },
        "Coefficients of det(I - u L_E), constant term first; big values as strings.");
  m.def("zeta_chamber", [](const TypedComplex& c) { return poly_py(zeta_chamber(c)); });
  m.def(
      "ratio",
      [](const TypedComplex& c, const std::string& sign) {
        if (sign != "minus" && sign != "plus") throw InputError("sign must be 'minus' or 'plus'");
        return to_py(to_json(ratio(c, sign == "minus" ? SignConvention::minus_u : SignConvention::plus_u)));
      },
      py::arg("complex"), py::arg("sign") = "minus");

  m.def(
      "count_closed_paths",
      [](const TypedComplex& c, int max_order, const std::string& kind, bool allow_large) {
        return count_closed_paths(c, max_order, parse_path_kind(kind), allow_large);
      },
      py::arg("complex"), py::arg("max_order") = kDefaultMaxOrder, py::arg("kind") = "edge",
      py::arg("allow_large") = false, "N[m] for m = 0..max_order; index 0 is unused.");
  m.def(
      "primitive_classes",
      [](const TypedComplex& c, int max_order, const std::string& kind, bool allow_large) {
        py::list out;
        for (const auto& g : enumerate_primitive_classes(c, max_order, parse_path_kind(kind), allow_large)) {
          out.append(class_py(g));
        }
        return out;
      },
      py::arg("complex"), py::arg("max_order") = kDefaultMaxOrder, py::arg("kind") = "edge",
      py::arg("allow_large") = false);

  m.def(
      "cone",
      [](const std::vector<IntVector>& functionals, std::optional<std::vector<IntVector>> lattice,
         std::optional<std::vector<py::object>> character,
         std::optional<std::vector<std::complex<double>>> eval, std::optional<std::int64_t> oracle_bound) {
        ConeArgs args;
        args.functionals = functionals;
        args.lattice = std::move(lattice);
        if (character) args.character = character_arg(*character);
        args.eval = std::move(eval);
        args.oracle_bound = oracle_bound;
        return to_py(run_cone(args));
      },
      py::arg("functionals"), py::arg("lattice") = py::none(), py::arg("character") = py::none(),
      py::arg("eval") = py::none(), py::arg("oracle_bound") = py::none(),
      "btz.cone/1 report. Character multipliers are ints or strings like '1/2', '-i', '1+2i'.");

  m.def(
      "classify",
      [](const py::object& f, std::optional<std::int64_t> q, std::optional<std::int64_t> chi, double tol) {
        return to_py(to_json(classify_ramanujan(ratio_arg(f), q, chi, tol)));
      },
      py::arg("ratio"), py::arg("q") = py::none(), py::arg("chi") = py::none(), py::arg("tol") = 1e-9,
      "Ramanujan classification of a {num, den} ratio (dict or JSON text).");
  m.def(
      "polynomial_roots",
      [](const std::vector<std::string>& coeffs) {
        std::vector<BigInt> c;
        for (const auto& x : coeffs) c.push_back(parse_bigint(x));
        std::vector<std::complex<double>> out;
        for (const auto& z : polynomial_roots(IntPolynomial(c))) {
          out.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
        }
        return out;
      },
      py::arg("coeffs"), "Roots with multiplicity; coefficients as decimal strings, constant term first.");

  m.def(
      "verify",
      [](const TypedComplex& c, std::optional<TorusGeometry> geometry, int max_order, double tol,
         bool allow_large, bool timings) {
        VerifyOptions opts;
        opts.torus = std::move(geometry);
        opts.max_order = max_order;
        opts.tol = tol;
        opts.allow_large = allow_large;
        opts.timings = timings;
        return to_py(run_verify(c, opts).doc);
      },
      py::arg("complex"), py::arg("geometry") = py::none(), py::arg("max_order") = kDefaultMaxOrder,
      py::arg("tol") = 1e-9, py::arg("allow_large") = false, py::arg("timings") = false,
      "btz.verify/1 report as a dict; stage failures are recorded under 'error'.");
}
