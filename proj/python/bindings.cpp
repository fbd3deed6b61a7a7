#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chrono>
#include <sstream>

#include "zlab/cli.hpp"
#include "zlab/errors.hpp"
#include "zlab/identities.hpp"
#include "zlab/relation.hpp"
#include "zlab/report.hpp"
#include "zlab/zeta.hpp"

namespace py = pybind11;
using namespace zlab;

namespace {

// A ball together with the digit count its midpoint is printed at.
struct PyBall {
  Ball value;
  int digits;

  std::string mid() const { return value.mid().to_string(digits); }
  std::string rad() const { return value.rad().to_string(3, MPFR_RNDU); }
};

Rational rational_of(const py::handle& obj) { return parse_rational(py::str(obj).cast<std::string>()); }

Ball argument(const py::handle& obj, const PrecisionContext& ctx) {
  return Ball::from_rational(rational_of(obj), ctx.bits());
}

Params params_of(const py::dict& d) {
  Params p;
  for (const auto& [name, value] : d) p.set(py::str(name).cast<std::string>(), rational_of(value));
  return p;
}

Report new_report(const PrecisionContext& ctx, const std::string& method) {
  Report r;
  r.digits = ctx.working_digits();
  r.tolerance = ctx.target_tolerance();
  r.method = method;
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
PyBall evaluate(int digits, F&& f) {
  const PrecisionContext ctx(digits);
  return {f(ctx), digits};
}

}  // namespace

PYBIND11_MODULE(_zlab, m) {
  m.doc() = "Certified zeta-series identity checks and integer-relation probes.";
  m.attr("__version__") = tool_version();

  // Translators run newest first, so the base class goes in before its subclasses.
  static py::exception<Error> base(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<PrecisionExhausted>(m, "PrecisionExhausted", base.ptr());
  py::register_exception<QuadratureNoConvergence>(m, "QuadratureNoConvergence", base.ptr());
  py::register_exception<UnknownIdentity>(m, "UnknownIdentity", base.ptr());
  py::register_exception<PrecisionTooLow>(m, "PrecisionTooLow", base.ptr());
  py::register_exception<InvalidQuery>(m, "InvalidQuery", base.ptr());

  py::class_<PyBall>(m, "Ball")
      .def_property_readonly("mid", &PyBall::mid)
      .def_property_readonly("rad", &PyBall::rad)
      .def_property_readonly("digits", [](const PyBall& b) { return b.digits; })
      .def("contains_zero", [](const PyBall& b) { return b.value.contains_zero(); })
      .def("__float__", [](const PyBall& b) { return b.value.mid().to_double(); })
      .def("__str__", [](const PyBall& b) { return format_ball(b.value, b.digits); })
      .def("__repr__", [](const PyBall& b) { return "Ball(" + b.mid() + " +/- " + b.rad() + ")"; });

  m.def(
      "zeta",
      [](const py::object& s, int digits) {
        return evaluate(digits, [&](const PrecisionContext& c) { return riemann_zeta(argument(s, c), c); });
      },
      py::arg("s"), py::arg("digits") = 50, "Riemann zeta(s); s is an int, decimal or 'p/q' string.");
  m.def(
      "hurwitz_zeta",
      [](const py::object& s, const py::object& q, int digits) {
        return evaluate(digits, [&](const PrecisionContext& c) { return hurwitz_zeta(argument(s, c), argument(q, c), c); });
      },
      py::arg("s"), py::arg("q"), py::arg("digits") = 50);
  m.def(
      "zeta_minus_one",
      [](const py::object& s, int digits) {
        return evaluate(digits, [&](const PrecisionContext& c) { return zeta_minus_one(argument(s, c), c); });
      },
      py::arg("s"), py::arg("digits") = 50);
  m.def(
      "tail_sum",
      [](const py::object& s, int digits) {
        return evaluate(digits, [&](const PrecisionContext& c) { return hurwitz_tail_sum(argument(s, c), c); });
      },
      py::arg("s"), py::arg("digits") = 50, "sum over m >= 2 of zeta(s, m), s > 2.");

  m.def("catalog", [] {
    py::list out;
    for (const auto& spec : catalog()) {
      py::list methods;
      for (CheckMethod mth : spec.allowed_methods) methods.append(to_string(mth));
      py::list grid;
      for (const auto& p : spec.default_grid) grid.append(p.to_string());
      py::dict d;
      d["id"] = spec.id;
      d["short_id"] = spec.short_id;
      d["statement"] = spec.statement;
      d["params"] = spec.param_names;
      d["methods"] = methods;
      d["default_grid"] = grid;
      out.append(d);
    }
    return out;
  });

  m.def(
      "check_json",
      [](const std::string& id, const py::dict& params, const std::string& method, int digits) {
        const PrecisionContext ctx(digits);
        const Params p = params_of(params);
        const CheckMethod mth = parse_check_method(method);
        Report report = new_report(ctx, to_string(mth));
        {
          py::gil_scoped_release release;
          const auto t0 = std::chrono::steady_clock::now();
          report.results.push_back(check(id, p, mth, ctx));
          report.wall_clock_seconds = seconds_since(t0);
        }
        return to_json(report);
      },
      py::arg("id"), py::arg("params") = py::dict(), py::arg("method") = "AUTO", py::arg("digits") = 50);

  m.def(
      "verify_all_json",
      [](const std::string& method, int digits) {
        const PrecisionContext ctx(digits);
        const CheckMethod mth = parse_check_method(method);
        Report report = new_report(ctx, to_string(mth));
        py::gil_scoped_release release;
        const auto t0 = std::chrono::steady_clock::now();
        for (auto& r : verify_all({}, ctx, mth)) report.results.push_back(std::move(r));
        report.wall_clock_seconds = seconds_since(t0);
        return to_json(report);
      },
      py::arg("method") = "AUTO", py::arg("digits") = 50);

  m.def(
      "find_relation_json",
      [](const std::vector<std::string>& tokens, long coeff_bound, int digits) {
        const PrecisionContext ctx(digits);
        RelationQuery q;
        q.coeff_bound = coeff_bound;
        q.labels = tokens;
        q.reevaluate = [tokens](const PrecisionContext& c) {
          std::vector<Ball> v;
          for (const auto& t : tokens) v.push_back(named_value(t, c));
          return v;
        };
        q.values = q.reevaluate(ctx);
        Report report = new_report(ctx, "PSLQ");
        py::gil_scoped_release release;
        const auto t0 = std::chrono::steady_clock::now();
        report.results.push_back(find_integer_relation(q, ctx));
        report.wall_clock_seconds = seconds_since(t0);
        return to_json(report);
      },
      py::arg("values"), py::arg("coeff_bound"), py::arg("digits") = 50);

  m.def(
      "probe_zeta_family_json",
      [](const std::vector<long>& js, long coeff_bound, int digits) {
        const PrecisionContext ctx(digits);
        Report report = new_report(ctx, "PSLQ");
        py::gil_scoped_release release;
        const auto t0 = std::chrono::steady_clock::now();
        for (auto& r : probe_zeta_family(js, coeff_bound, ctx)) report.results.push_back(std::move(r));
        report.wall_clock_seconds = seconds_since(t0);
        return to_json(report);
      },
      py::arg("js"), py::arg("coeff_bound"), py::arg("digits") = 100);

  m.def("strip_timing", &strip_timing, py::arg("report_json"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in process; returns (exit_code, stdout, stderr).");
}
