// Python bindings. Structured results (reports, parameters, matrices) cross
// the boundary as plain dicts and lists in the same shapes as the JSON formats.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lfrm/error.hpp"
#include "lfrm/verify.hpp"

namespace py = pybind11;
using namespace lfrm;

namespace {

py::object to_py(const Json& j) {
  if (j.is_null()) return py::none();
  if (j.is_boolean()) return py::bool_(j.get<bool>());
  if (j.is_number_unsigned()) return py::int_(j.get<std::uint64_t>());
  if (j.is_number_integer()) return py::int_(j.get<std::int64_t>());
  if (j.is_number_float()) return py::float_(j.get<double>());
  if (j.is_string()) return py::str(j.get<std::string>());
  if (j.is_array()) {
    py::list l;
    for (const auto& e : j) l.append(to_py(e));
    return std::move(l);
  }
  py::dict d;
  for (const auto& [k, v] : j.items()) d[py::str(k)] = to_py(v);
  return std::move(d);
}

Json from_py(const py::handle& o) {
  if (o.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(o)) return o.cast<bool>();
  if (py::isinstance<py::int_>(o)) return o.cast<std::int64_t>();
  if (py::isinstance<py::float_>(o)) return o.cast<double>();
  if (py::isinstance<py::str>(o)) return o.cast<std::string>();
  if (py::isinstance<py::dict>(o)) {
    Json j = Json::object();
    for (const auto& [k, v] : o.cast<py::dict>()) j[py::str(k).cast<std::string>()] = from_py(v);
    return j;
  }
  if (py::isinstance<py::sequence>(o)) {
    Json j = Json::array();
    for (const auto& v : o.cast<py::sequence>()) j.push_back(from_py(v));
    return j;
  }
  throw py::type_error("expected JSON-like value");
}

std::vector<FieldElement> elements(const FieldParams& f, const py::sequence& xs) {
  std::vector<FieldElement> out;
  for (const auto& x : xs) {
    if (py::isinstance<FieldElement>(x)) {
      out.push_back(x.cast<FieldElement>());
    } else {
      out.push_back(element_from_json(f, from_py(x)));
    }
  }
  return out;
}

bool is_delta(const Json& j) { return j.is_object() && (j.contains("head") || j.contains("tail")); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Local-field arithmetic, invariant random matrix measures and orbital integrals";

  static py::exception<Error> error_type(m, "LfrmError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type, e.what());
    }
  });

  py::class_<FieldParams>(m, "Field")
      .def(py::init([](const std::string& spec) { return FieldParams::parse(spec); }), py::arg("spec"))
      .def_readonly("p", &FieldParams::p)
      .def_readonly("q", &FieldParams::q)
      .def_readonly("precision", &FieldParams::precision)
      .def_readonly("nonsquare_digit", &FieldParams::nonsquare_digit)
      .def_readonly("s_chi", &FieldParams::s_chi)
      .def_property_readonly("family", [](const FieldParams& f) { return f.family == Family::PAdic ? "padic" : "laurent"; })
      .def("spec", &FieldParams::spec)
      .def("__repr__", [](const FieldParams& f) { return "Field('" + f.spec() + "')"; });

  py::class_<FieldElement>(m, "Element")
      .def(py::init([](const FieldParams& f, const py::object& v) { return element_from_json(f, from_py(v)); }),
           py::arg("field"), py::arg("value"))
      .def_static("power", &FieldElement::uniformizer_power, py::arg("field"), py::arg("k"))
      .def_property_readonly("valuation", [](const FieldElement& x) -> py::object {
        if (x.is_zero()) return py::none();
        return py::int_(x.valuation());
      })
      .def_property_readonly("digits", [](const FieldElement& x) {
        std::vector<int> d(x.digits().begin(), x.digits().end());
        return d;
      })
      .def("is_zero", &FieldElement::is_zero)
      .def("to_json", [](const FieldElement& x) { return to_py(to_json(x)); })
      .def("__mul__", [](const FieldElement& a, const FieldElement& b) { return a * b; })
      .def("__add__", [](const FieldElement& a, const FieldElement& b) { return FieldElement::add(a, b, Cancellation::Flush); })
      .def("__eq__", [](const FieldElement& a, const FieldElement& b) { return a == b; })
      .def("__repr__", &FieldElement::to_string);

  py::class_<CharValue>(m, "CharValue")
      .def_property_readonly("unit", &CharValue::unit_string)
      .def_readonly("half_exp", &CharValue::half_exp)
      .def("to_complex", &CharValue::to_complex, py::arg("q"))
      .def("to_json", [](const CharValue& v) { return to_py(to_json(v)); })
      .def("__eq__", [](const CharValue& a, const CharValue& b) { return a == b; })
      .def("__mul__", [](const CharValue& a, const CharValue& b) { return a * b; })
      .def("__repr__", [](const CharValue& v) { return to_json(v).dump(); });

  m.def("gauss_sum", [](std::int64_t a, std::uint32_t p) {
    const GaussSumResult g = gauss_sum(ResidueElement::make(a, p));
    py::dict d;
    d["value"] = g.complex_value;
    d["sign"] = g.sign;
    d["rho"] = g.rho == Rho::One ? "1" : "i";
    return d;
  }, py::arg("a"), py::arg("p"));
  m.def("legendre", [](std::int64_t a, std::uint32_t p) { return legendre(ResidueElement::make(a, p)); });

  m.def("chi", &chi, py::arg("x"));
  m.def("theta", [](const FieldElement& x, bool big) {
    return theta_closed(x, big ? ThetaKind::Theta : ThetaKind::LittleTheta);
  }, py::arg("x"), py::arg("big") = false);
  m.def("theta_bruteforce", [](const FieldElement& x, bool big) {
    return theta_bruteforce(x, big ? ThetaKind::Theta : ThetaKind::LittleTheta);
  }, py::arg("x"), py::arg("big") = false);

  m.def("snf", [](const FieldParams& f, const py::object& mat) {
    return to_py(to_json(smith_normal_form(matrix_from_json(f, from_py(mat)))));
  }, py::arg("field"), py::arg("matrix"));
  m.def("symdiag", [](const FieldParams& f, const py::object& mat) {
    return to_py(to_json(sym_diagonalize(matrix_from_json(f, from_py(mat)))));
  }, py::arg("field"), py::arg("matrix"));

  m.def("charfun", [](const py::dict& param, const FieldElement& x) {
    const Json pj = from_py(param);
    if (is_delta(pj)) {
      if (x.is_zero()) throw py::value_error("x must be nonzero");
      return char_mu(delta_from_json(pj), -x.valuation());
    }
    return char_nu(omega_from_json(pj), x);
  }, py::arg("param"), py::arg("x"));
  m.def("oplus", [](const py::dict& a, const py::dict& b) {
    const Json ja = from_py(a), jb = from_py(b);
    if (is_delta(ja) != is_delta(jb)) throw py::value_error("parameters must be of the same type");
    return to_py(is_delta(ja) ? to_json(oplus(delta_from_json(ja), delta_from_json(jb)))
                              : to_json(oplus(omega_from_json(ja), omega_from_json(jb))));
  }, py::arg("a"), py::arg("b"));
  m.def("distinguishing_argument", [](const py::dict& a, const py::dict& b) {
    return distinguishing_argument(delta_from_json(from_py(a)), delta_from_json(from_py(b)));
  });

  m.def("sample", [](const FieldParams& f, const std::string& what, int n, std::uint64_t seed, const py::object& param) {
    RandomStream rng = RandomStream(seed).derive("sample").derive(what);
    MatF out = what == "haar" ? haar_gl(f, n, rng)
               : what == "mu" ? sample_mu_corner(f, delta_from_json(from_py(param)), n, rng)
               : what == "nu" ? sample_nu_corner(f, omega_from_json(from_py(param)), n, rng)
                              : throw py::value_error("what must be mu, nu or haar");
    return to_py(to_json(out));
  }, py::arg("field"), py::arg("what"), py::arg("n"), py::arg("seed") = 1, py::arg("param") = py::none());

  m.def("orbital_integral", [](const FieldParams& f, const std::string& kind, const py::sequence& D,
                               const py::sequence& A, int n, std::int64_t samples, std::uint64_t seed, int workers) {
    const auto d = elements(f, D), a = elements(f, A);
    const IntegralKind k = parse_integral_kind(kind);
    Json report;
    {
      py::gil_scoped_release release;
      report = to_json(verify_bound(k, d, a, n, samples, RandomStream(seed).derive("integral"), workers));
    }
    return to_py(report);
  }, py::arg("field"), py::arg("kind"), py::arg("D"), py::arg("A"), py::arg("n"), py::arg("samples") = 100000,
     py::arg("seed") = 1, py::arg("workers") = 1);
  m.def("exact_orbital_integral", [](const FieldParams& f, const std::string& kind, const py::sequence& D,
                                     const py::sequence& A, int n, int level) {
    return exact_orbital_integral(parse_integral_kind(kind), elements(f, D), elements(f, A), n, level);
  }, py::arg("field"), py::arg("kind"), py::arg("D"), py::arg("A"), py::arg("n"), py::arg("level"));
  m.def("product_formula", [](const FieldParams& f, const std::string& kind, const py::sequence& D,
                              const py::sequence& A) {
    return product_formula(parse_integral_kind(kind), elements(f, D), elements(f, A));
  }, py::arg("field"), py::arg("kind"), py::arg("D"), py::arg("A"));
  m.def("error_bound", [](const std::string& kind, int n, int r, std::uint32_t q) {
    const ErrorBounds b = error_bound(parse_integral_kind(kind), n, r, q);
    py::dict d;
    d["stated"] = to_string(b.stated);
    d["uam"] = to_string(b.uam);
    d["corrected"] = to_string(b.corrected);
    d["corrected_uam"] = to_string(b.corrected_uam);
    return d;
  }, py::arg("kind"), py::arg("n"), py::arg("r"), py::arg("q"));

  m.def("run_criterion", [](int id, std::uint64_t seed, int workers, std::int64_t samples) {
    CriterionOptions opt;
    opt.seed = seed;
    opt.workers = workers;
    opt.mc_samples = samples;
    CriterionResult r;
    {
      py::gil_scoped_release release;
      r = run_criterion(id, opt);
    }
    return to_py(to_json(r));
  }, py::arg("id"), py::arg("seed") = 1, py::arg("workers") = 0, py::arg("samples") = 100000);
}
