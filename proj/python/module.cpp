#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cbn/cbn_nf.hpp"
#include "cbn/cbn_rs.hpp"
#include "cbn/error.hpp"
#include "cbn/oracle.hpp"

namespace py = pybind11;
using namespace cbn;

namespace {

Approx approx_arg(const std::string& s) {
  auto a = parse_approx(s);
  if (!a) throw py::value_error("approximation must be one of s, nv, g");
  return *a;
}

ExploreMode mode_arg(const std::string& s) {
  if (s == "pruned") return ExploreMode::pruned;
  if (s == "exhaustive") return ExploreMode::exhaustive;
  throw py::value_error("mode must be pruned or exhaustive");
}

Term term_arg(const Trs& trs, const std::string& text) { return parse_term(text, {}, trs.signature()); }

py::dict verdict_dict(const Verdict& v) {
  py::dict d;
  d["in_class"] = v.in_class;
  d["witness"] = v.witness ? py::cast(v.witness->str()) : py::none();
  py::list ev;
  for (const Evidence& e : v.evidence) ev.append(py::make_tuple(e.position.str(), e.variant.str(), e.accepted));
  d["evidence"] = ev;
  d["pair_states"] = v.stats.pair_states;
  d["tuples"] = v.stats.tuples;
  return d;
}

py::list redex_rows(const Term& t, const std::vector<NeededRedex>& rows) {
  py::list out;
  for (const NeededRedex& r : rows)
    out.append(py::make_tuple(r.position.str(), subterm_at(t, r.position).str(), r.needed));
  return out;
}

}  // namespace

PYBIND11_MODULE(cbn, m) {
  m.doc() = "Call-by-need class membership for left-linear rewrite systems";

  py::register_exception<Error>(m, "CbnError", PyExc_ValueError);
  py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);

  py::class_<Trs>(m, "Trs")
      .def_property_readonly("rules", [](const Trs& t) {
        std::vector<std::string> out;
        for (const Rule& r : t.rules()) out.push_back(r.str());
        return out;
      })
      .def_property_readonly("left_linear", &Trs::left_linear)
      .def_property_readonly("linear", &Trs::linear)
      .def_property_readonly("growing", &Trs::growing)
      .def_property_readonly("orthogonal", [](const Trs& t) { return is_orthogonal(t); })
      .def("__str__", &Trs::str)
      .def("__len__", &Trs::rule_count);

  m.def("parse_trs", [](const std::string& text) { return parse_trs(text); }, py::arg("text"));

  m.def(
      "decide_nf",
      [](const Trs& trs, const std::string& approx, const std::string& mode, std::size_t max_states) {
        return verdict_dict(decide_cbn_nf(trs, approx_arg(approx), mode_arg(mode), max_states));
      },
      py::arg("trs"), py::arg("approx") = "g", py::arg("mode") = "pruned", py::arg("max_states") = 100000);

  m.def(
      "decide_rs",
      [](const Trs& trs, const std::string& alpha, const std::string& beta, const std::string& mode,
         std::size_t max_states) {
        return verdict_dict(decide_cbn_rs(trs, approx_arg(alpha), approx_arg(beta), mode_arg(mode), max_states));
      },
      py::arg("trs"), py::arg("alpha") = "g", py::arg("beta") = "g", py::arg("mode") = "pruned",
      py::arg("max_states") = 100000);

  m.def(
      "needed_redexes",
      [](const Trs& trs, const std::string& term, const std::string& approx) {
        Term t = term_arg(trs, term);
        return redex_rows(t, needed_redexes(trs, approx_arg(approx), t));
      },
      py::arg("trs"), py::arg("term"), py::arg("approx") = "g");

  m.def(
      "root_needed_redexes",
      [](const Trs& trs, const std::string& term, const std::string& alpha, const std::string& beta) {
        Term t = term_arg(trs, term);
        return redex_rows(t, root_needed_redexes(trs, approx_arg(alpha), approx_arg(beta), t));
      },
      py::arg("trs"), py::arg("term"), py::arg("alpha") = "g", py::arg("beta") = "g");

  m.def(
      "normalize",
      [](const Trs& trs, const std::string& term, const std::string& approx, std::size_t fuel) {
        NfAnalyzer an(trs, approx_arg(approx));
        NormalizeResult r = normalize_by_need(an, term_arg(trs, term), fuel);
        std::vector<std::string> trace;
        for (const NormalizeStep& s : r.trace) trace.push_back(s.result.str());
        return py::make_tuple(r.term.str(), to_string(r.status), trace);
      },
      py::arg("trs"), py::arg("term"), py::arg("approx") = "g", py::arg("fuel") = 100);

  m.def(
      "selfcheck",
      [](const Trs& trs, unsigned depth) {
        SelfcheckOptions opt;
        opt.depth = depth;
        py::list out;
        for (const OracleReport& r : selfcheck(trs, opt)) {
          py::dict d;
          d["name"] = r.name;
          d["checked"] = r.checked;
          d["inconclusive"] = r.inconclusive;
          d["disagreements"] = r.disagreements.size();
          out.append(d);
        }
        return out;
      },
      py::arg("trs"), py::arg("depth") = 2);
}
