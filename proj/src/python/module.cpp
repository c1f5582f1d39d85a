// Python bindings. Formulas cross the boundary as text; reports as JSON text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mereo/cli.hpp"
#include "mereo/engine.hpp"
#include "mereo/finmodel.hpp"
#include "mereo/formula.hpp"
#include "mereo/hfsets.hpp"

namespace py = pybind11;
using namespace mereo;

namespace {

engine::Options options_for(std::size_t budget) {
  engine::Options o;
  o.node_budget = budget;
  o.record_trace = false;
  return o;
}

finmodel::Assignment to_assignment(const std::map<std::string, std::vector<std::uint64_t>>& raw) {
  finmodel::Assignment a;
  for (const auto& [name, elements] : raw) a.emplace(name, finmodel::FinSet(elements));
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantifier elimination for set-theoretic mereology and a hereditarily finite sets lab";

  static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  static py::exception<engine::NotASentence> not_a_sentence(m, "NotASentence", PyExc_ValueError);
  static py::exception<engine::BudgetExceeded> budget_exceeded(m, "BudgetExceeded", PyExc_RuntimeError);
  static py::exception<finmodel::EvaluationError> evaluation_error(m, "EvaluationError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      parse_error(e.what());
    } catch (const engine::NotASentence& e) {
      not_a_sentence(e.what());
    } catch (const engine::BudgetExceeded& e) {
      budget_exceeded(e.what());
    } catch (const finmodel::EvaluationError& e) {
      evaluation_error(e.what());
    }
  });

  m.def("normalize", [](const std::string& text) { return render(parse(text)); },
        "Parse and render back in canonical form.", py::arg("text"));
  m.def("free_variables", [](const std::string& text) { return free_variables(parse(text)); }, py::arg("text"));
  m.def("witness_bound", [](const std::string& text) { return witness_bound(parse(text)); }, py::arg("text"));

  m.def(
      "decide",
      [](const std::string& text, std::size_t budget) {
        const Formula f = parse(text);
        py::gil_scoped_release release;
        return engine::decide(f, options_for(budget)).verdict;
      },
      py::arg("sentence"), py::arg("budget") = 1'000'000);
  m.def(
      "eliminate",
      [](const std::string& text, std::size_t budget) {
        const Formula f = parse(text);
        py::gil_scoped_release release;
        return render(engine::eliminate(f, options_for(budget)));
      },
      py::arg("formula"), py::arg("budget") = 1'000'000);
  m.def(
      "eliminate_exists",
      [](const std::string& x, const std::string& conj) { return render(engine::eliminate_exists(x, parse(conj))); },
      "Eliminate x from a conjunction of cardinality literals.", py::arg("x"), py::arg("conjunction"));

  m.def(
      "eval_formula",
      [](const std::string& text, const std::map<std::string, std::vector<std::uint64_t>>& assignment,
         std::optional<std::uint64_t> fresh_budget) {
        const Formula f = parse(text);
        const std::uint64_t budget = fresh_budget ? *fresh_budget : witness_bound(f);
        return finmodel::eval_formula(f, to_assignment(assignment), budget);
      },
      py::arg("formula"), py::arg("assignment") = std::map<std::string, std::vector<std::uint64_t>>{},
      py::arg("fresh_budget") = py::none());
  m.def(
      "check_equivalence",
      [](const std::string& f, const std::string& g, std::size_t samples, std::size_t universe_size,
         std::uint64_t seed) -> py::object {
        auto ce = finmodel::check_equivalence(parse(f), parse(g), samples, universe_size, seed);
        if (!ce) return py::none();
        py::dict assignment;
        for (const auto& [name, set] : ce->assignment) assignment[py::str(name)] = set.elements();
        py::dict out;
        out["assignment"] = assignment;
        out["lhs"] = ce->lhs_value;
        out["rhs"] = ce->rhs_value;
        out["sample"] = ce->sample;
        return out;
      },
      "None when every sampled assignment agrees, else the first counterexample.", py::arg("f"), py::arg("g"),
      py::arg("samples") = 20, py::arg("universe_size") = 8, py::arg("seed") = 0);

  m.def("hf_mem_star",
        [](const std::string& a, const std::string& b, const std::string& z) {
          return hf::mem_star(hf::parse_hf(a), hf::parse_hf(b), hf::parse_hf(z));
        },
        py::arg("a"), py::arg("b"), py::arg("z") = "{}");
  m.def("hf_tau", [](const std::string& u, const std::string& z) { return hf::render(hf::tau(hf::parse_hf(u), hf::parse_hf(z))); },
        py::arg("u"), py::arg("z") = "{}");

  m.def(
      "run",
      [](const std::string& command, const std::string& input, std::optional<std::string> format, bool trace,
         std::uint64_t budget, std::uint64_t seed, std::uint64_t count, std::uint64_t universe_size,
         std::uint64_t max_rank, const std::string& z) {
        auto cmd = cli::parse_command(command);
        if (!cmd) throw py::value_error("unknown command '" + command + "'");
        cli::RunConfig config;
        config.command = *cmd;
        if (format) {
          config.format = cli::parse_format(*format);
          if (!config.format) throw py::value_error("format must be text or json");
        }
        config.trace = trace;
        config.budget = budget;
        config.seed = seed;
        config.count = count;
        config.universe_size = universe_size;
        config.max_rank = max_rank;
        config.z_spec = z;
        cli::RunResult r;
        {
          py::gil_scoped_release release;
          r = cli::run(config, input);
        }
        return py::make_tuple(r.exit_code, r.out, r.err);
      },
      "Run a command-line subcommand; returns (exit_code, stdout, stderr).", py::arg("command"),
      py::arg("input") = "", py::arg("format") = py::none(), py::arg("trace") = false, py::arg("budget") = 1'000'000,
      py::arg("seed") = 0, py::arg("count") = 500, py::arg("universe_size") = 8, py::arg("max_rank") = 3,
      py::arg("z") = "{}");
}
