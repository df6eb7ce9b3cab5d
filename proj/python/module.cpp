#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nucad/encode.hpp"
#include "nucad/errors.hpp"
#include "nucad/frontend.hpp"
#include "nucad/oracle.hpp"

namespace py = pybind11;
using namespace nucad;

namespace {

struct Settings {
  std::string split = "improved";
  std::string var_order = "input";
  std::uint64_t budget = 0;
  double timeout = 0;
};

SolverConfig config_of(const Settings& s) {
  SolverConfig c;
  if (s.split != "classic" && s.split != "improved") throw DomainError("split must be 'classic' or 'improved'");
  c.split = s.split == "classic" ? SplitMode::Classic : SplitMode::Improved;
  c.step_budget = s.budget;
  c.timeout_seconds = s.timeout;
  return c;
}

PrenexFormula problem_of(const std::string& text, const Settings& s) {
  if (s.var_order != "input" && s.var_order != "degree") throw DomainError("var_order must be 'input' or 'degree'");
  return prepare(parse_smtlib(text), s.var_order == "degree" ? VarOrdering::Degree : VarOrdering::Input);
}

Settings settings(const std::string& split, const std::string& var_order, std::uint64_t budget, double timeout) {
  return Settings{split, var_order, budget, timeout};
}

py::dict stats_dict(const StatsReport& r) {
  py::dict d;
  d["atoms"] = r.atoms;
  d["cells"] = r.cells;
  d["leaves"] = r.leaves;
  d["symbolic_intervals"] = r.symbolic_intervals;
  d["sections"] = r.sections;
  d["real_root_seconds"] = r.real_root_seconds;
  d["non_algebraic_seconds"] = r.non_algebraic_seconds;
  d["total_seconds"] = r.total_seconds;
  d["aborted"] = r.aborted;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact NuCAD decision procedure and quantifier elimination";

  static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  static py::exception<UnsupportedError> unsupported(m, "UnsupportedError", PyExc_ValueError);
  static py::exception<NullificationFailure> nullified(m, "NullificationFailure", PyExc_RuntimeError);
  static py::exception<BudgetExceeded> budget(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      py::set_error(parse_error, e.what());
    } catch (const UnsupportedError& e) {
      py::set_error(unsupported, e.what());
    } catch (const NullificationFailure& e) {
      py::set_error(nullified, e.what());
    } catch (const BudgetExceeded& e) {
      py::set_error(budget, e.what());
    } catch (const DomainError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("parse", [](const std::string& text) {
        ProblemInstance p = parse_smtlib(text);
        py::dict d;
        std::vector<std::string> names;
        for (std::size_t l = 1; l <= p.vars.size(); ++l) names.push_back(p.vars.name(l));
        d["variables"] = names;
        d["declared"] = p.declared;
        d["quantified"] = p.quantified;
        d["mode"] = p.mode == ProblemMode::Sat ? "sat" : p.mode == ProblemMode::Decide ? "decide" : "qe";
        d["smtlib"] = print_smtlib(p);
        return d;
      },
      py::arg("text"), "Parse an SMT-LIB script; returns its variables, mode and canonical printed form.");

  m.def("solve", [](const std::string& text, const std::string& split, const std::string& var_order,
                    std::uint64_t budget_steps, double timeout) {
        PrenexFormula pf = problem_of(text, settings(split, var_order, budget_steps, timeout));
        PrenexFormula closed = pf;
        closed.prefix.insert(closed.prefix.begin(), pf.free_count, Quantifier::Exists);
        closed.free_count = 0;
        NuCadSolver solver(closed, config_of(settings(split, var_order, budget_steps, timeout)));
        bool sat;
        {
          py::gil_scoped_release release;
          sat = solver.decide();
        }
        py::dict witness;
        if (sat && solver.block_witness())
          for (std::size_t l = 1; l <= pf.free_count; ++l) {
            const AlgebraicNumber& a = (*solver.block_witness())[l - 1];
            witness[py::str(pf.vars.name(l))] = a.is_rational() ? a.rational().get_str() : a.to_string();
          }
        return py::make_tuple(sat, witness);
      },
      py::arg("text"), py::arg("split") = "improved", py::arg("var_order") = "input", py::arg("budget") = 0,
      py::arg("timeout") = 0.0, "Satisfiability with free variables read existentially: (sat, witness).");

  m.def("decide", [](const std::string& text, const std::string& split, std::uint64_t budget_steps, double timeout) {
        Settings s = settings(split, "input", budget_steps, timeout);
        NuCadSolver solver(problem_of(text, s), config_of(s));
        py::gil_scoped_release release;
        return solver.decide();
      },
      py::arg("text"), py::arg("split") = "improved", py::arg("budget") = 0, py::arg("timeout") = 0.0,
      "Truth value of a sentence.");

  m.def("qe", [](const std::string& text, const std::string& split, const std::string& var_order, bool smtlib,
                 bool pure, std::uint64_t budget_steps) {
        Settings s = settings(split, var_order, budget_steps, 0);
        PrenexFormula pf = problem_of(text, s);
        NuCadSolver solver(pf, config_of(s));
        SolutionFormula q = emit_formula(merge_tree(solver.decompose()));
        return smtlib ? q.to_smtlib(pf.vars, pure) : q.to_string(&pf.vars);
      },
      py::arg("text"), py::arg("split") = "improved", py::arg("var_order") = "input", py::arg("smtlib") = false,
      py::arg("pure") = false, py::arg("budget") = 0, "Quantifier-free formula equivalent over the free variables.");

  m.def("plot", [](const std::string& text, int resolution, bool samples, const std::string& split) {
        Settings s = settings(split, "input", 0, 0);
        PrenexFormula pf = problem_of(text, s);
        NuCadSolver solver(pf, config_of(s));
        PlotOptions o;
        o.resolution = resolution;
        o.samples = samples;
        return render_svg(solver.decompose(), pf.vars, pf.free_count, o);
      },
      py::arg("text"), py::arg("resolution") = 400, py::arg("samples") = false, py::arg("split") = "improved",
      "SVG picture of the decomposition of the free variables (one or two).");

  m.def("stats", [](const std::string& text, const std::string& split) {
        Settings s = settings(split, "input", 0, 0);
        PrenexFormula pf = problem_of(text, s);
        NuCadSolver solver(pf, config_of(s));
        if (pf.free_count == 0) {
          solver.decide();
          return stats_dict(collect_stats(solver.stats()));
        }
        NuCadTree t = solver.decompose();
        SolutionFormula q = emit_formula(merge_tree(t));
        return stats_dict(collect_stats(solver.stats(), &t, &q));
      },
      py::arg("text"), py::arg("split") = "improved", "Decomposition statistics.");

  m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line driver; returns (exit_code, stdout, stderr).");
}
