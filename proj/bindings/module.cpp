#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "seplog/errors.hpp"
#include "seplog/fuzz.hpp"
#include "seplog/parser.hpp"
#include "seplog/printer.hpp"
#include "seplog/report.hpp"
#include "seplog/semantics.hpp"
#include "seplog/symbolic.hpp"
#include "seplog/verifier.hpp"

namespace py = pybind11;
using namespace seplog;

namespace {

State make_state(const std::map<std::string, std::int64_t>& store,
                 const std::map<std::int64_t, std::int64_t>& heap) {
  State st;
  st.store = store;
  for (const auto& [l, v] : heap) {
    if (l < 1) throw Error("heap locations must be >= 1, got " + std::to_string(l));
    st.heap[l] = v;
  }
  return st;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compiled core: parsing, execution, assertion checking, entailment "
            "proving and outline verification for a small heap language.";

  py::register_exception<ParseError>(m, "SourceError", PyExc_ValueError);
  py::register_exception<FragmentError>(m, "FragmentError", PyExc_ValueError);
  py::register_exception<LimitError>(m, "LimitError", PyExc_RuntimeError);
  py::register_exception<EvalError>(m, "EvaluationError", PyExc_ValueError);

  m.def(
      "check_json",
      [](const std::string& source, int depth, const std::string& name) {
        Program prog = parse_program(source);
        CheckConfig cfg;
        cfg.max_depth = depth;
        return check_report_json(check_outline(prog, cfg), name);
      },
      py::arg("source"), py::arg("depth") = 64, py::arg("name") = "<string>");

  m.def(
      "run_json",
      [](const std::string& source, const std::map<std::string, std::int64_t>& store,
         const std::map<std::int64_t, std::int64_t>& heap, std::int64_t fuel,
         std::int64_t alloc_base) {
        Program prog = parse_program(source);
        State initial = initial_state(prog, Store(store.begin(), store.end()));
        initial.heap = make_state({}, heap).heap;
        ExecResult result = exec(prog.body, initial, {fuel, alloc_base});
        return run_report_json(result, initial);
      },
      py::arg("source"), py::arg("store") = std::map<std::string, std::int64_t>{},
      py::arg("heap") = std::map<std::int64_t, std::int64_t>{}, py::arg("fuel") = 10000,
      py::arg("alloc_base") = 1);

  m.def(
      "sat",
      [](const std::string& assertion, const std::map<std::string, std::int64_t>& store,
         const std::map<std::int64_t, std::int64_t>& heap,
         std::optional<std::vector<std::int64_t>> values,
         std::optional<std::vector<std::int64_t>> locations) {
        AssertionPtr a = parse_assertion(assertion);
        State st = make_state(store, heap);
        DomainConfig cfg = DomainConfig::defaults_for(st, *a);
        if (values) cfg.values = *values;
        if (locations) cfg.locations = *locations;
        return sat(*a, st, cfg);
      },
      py::arg("assertion"), py::arg("store") = std::map<std::string, std::int64_t>{},
      py::arg("heap") = std::map<std::int64_t, std::int64_t>{}, py::arg("values") = py::none(),
      py::arg("locations") = py::none());

  m.def(
      "entail_json",
      [](const std::string& query, int depth) {
        auto [lhs, rhs] = parse_entailment(query);
        EntailResult r = entails(to_symbolic(lhs), to_symbolic(rhs), {depth});
        return entail_report_json(r, query);
      },
      py::arg("query"), py::arg("depth") = 64);

  m.def(
      "fuzz_json",
      [](const std::string& source, std::size_t samples, std::uint64_t seed, std::int64_t fuel,
         std::int64_t alloc_base, const std::string& name) {
        Program prog = parse_program(source);
        FuzzConfig cfg;
        cfg.samples = samples;
        cfg.seed = seed;
        cfg.fuel = fuel;
        cfg.alloc_base = alloc_base;
        FuzzReport r =
            fuzz_triple(prog.precondition, prog.body, prog.postcondition, prog.variables, cfg);
        return fuzz_report_json(r, name);
      },
      py::arg("source"), py::arg("samples") = 100, py::arg("seed") = 0,
      py::arg("fuel") = 10000, py::arg("alloc_base") = 1, py::arg("name") = "<string>");

  m.def(
      "render_program",
      [](const std::string& source) { return render(parse_program(source)); },
      py::arg("source"), "Parse a program and return its canonical text form.");

  m.def(
      "render_assertion",
      [](const std::string& assertion) { return render(*parse_assertion(assertion)); },
      py::arg("assertion"));

  m.def(
      "wp",
      [](const std::string& command, const std::string& post) {
        return render(*wp(*parse_command(command), parse_assertion(post)));
      },
      py::arg("command"), py::arg("post"),
      "Backward-rule precondition of an atomic command, as assertion text.");
}
