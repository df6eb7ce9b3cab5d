#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nucad/encode.hpp"
#include "nucad/errors.hpp"
#include "nucad/frontend.hpp"
#include "nucad/oracle.hpp"

namespace nucad {

namespace {

struct Options {
  std::string file;
  std::string split = "improved";
  std::string order = "input";
  double timeout = 0;
  std::uint64_t budget = 0;
  unsigned threads = 1;

  // qe
  bool smtlib = false, pure = false, tree = false, tree_json = false;
  // plot
  std::string output;
  int resolution = 400;
  bool samples = false;
  // stats
  bool times = false;
  std::string format = "csv";
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("file", o.file, "SMT-LIB input file, or - for standard input")->required();
  sub->add_option("--split", o.split, "region splitting")->check(CLI::IsMember({"classic", "improved"}));
  sub->add_option("--var-order", o.order, "variable order")->check(CLI::IsMember({"input", "degree"}));
  sub->add_option("--timeout", o.timeout, "time limit in seconds (0 = none)")->check(CLI::NonNegativeNumber);
  sub->add_option("--budget", o.budget, "limit on explored cells (0 = none)");
  sub->add_option("--threads", o.threads, "worker threads for the top-level cells")->check(CLI::PositiveNumber);
}

std::string read_input(const std::string& file) {
  std::ostringstream ss;
  if (file == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open " + file);
  ss << in.rdbuf();
  return ss.str();
}

SolverConfig config_of(const Options& o) {
  SolverConfig c;
  c.split = o.split == "classic" ? SplitMode::Classic : SplitMode::Improved;
  c.step_budget = o.budget;
  c.timeout_seconds = o.timeout;
  c.threads = o.threads;
  return c;
}

std::string value_text(const AlgebraicNumber& a) {
  if (a.is_rational()) return a.rational().get_str();
  return a.to_string() + " ~ " + a.to_decimal(12);
}

/// The sentence obtained by closing the free variables existentially.
PrenexFormula existential_closure(const PrenexFormula& pf) {
  PrenexFormula out = pf;
  out.prefix.insert(out.prefix.begin(), pf.free_count, Quantifier::Exists);
  out.free_count = 0;
  return out;
}

void print_stats(std::ostream& out, const Options& o, const StatsReport& r) {
  if (o.format == "text") {
    out << r.to_text(o.times);
  } else {
    out << StatsReport::csv_header(o.times) << '\n' << r.csv_row(o.times) << '\n';
  }
}

int solve(const PrenexFormula& pf, const Options& o, std::ostream& out) {
  NuCadSolver solver(existential_closure(pf), config_of(o));
  if (!solver.decide()) {
    out << "unsat\n";
    return kExitOk;
  }
  out << "sat\n";
  std::optional<SamplePoint> w = solver.block_witness();
  auto rational = [&](const SamplePoint& x) {
    for (std::size_t l = 0; l < pf.free_count && l < x.size(); ++l)
      if (!x[l].is_rational()) return false;
    return true;
  };
  if (w && !rational(*w)) {
    // the first witness lies on a boundary; look for a full-dimensional TRUE cell
    NuCadSolver full(pf, config_of(o));
    NuCadTree t = full.decompose();
    for (const auto& leaf : leaf_cells(t)) {
      bool open = std::none_of(leaf.cell.begin(), leaf.cell.end(), [](const auto& I) { return I.is_section(); });
      if (leaf.label && open && rational(leaf.leaf->sample)) {
        w = leaf.leaf->sample;
        break;
      }
    }
  }
  for (std::size_t l = 1; l <= pf.free_count && w && l <= w->size(); ++l)
    out << pf.vars.name(l) << " = " << value_text((*w)[l - 1]) << '\n';
  return kExitOk;
}

int decide(const PrenexFormula& pf, const Options& o, std::ostream& out, std::ostream& err) {
  if (pf.free_count != 0) {
    err << "decide: the input has free variables; use solve or qe\n";
    return kExitUsage;
  }
  NuCadSolver solver(pf, config_of(o));
  out << (solver.decide() ? "true" : "false") << '\n';
  return kExitOk;
}

int qe(const PrenexFormula& pf, const Options& o, std::ostream& out) {
  if (pf.free_count == 0) {
    NuCadSolver solver(pf, config_of(o));
    bool v = solver.decide();
    out << (o.smtlib ? (v ? "true" : "false") : (v ? "TRUE" : "FALSE")) << '\n';
    return kExitOk;
  }
  NuCadSolver solver(pf, config_of(o));
  NuCadTree t = solver.decompose();
  NuCadTree m = merge_tree(t);
  if (o.tree) out << m.to_string(&pf.vars);
  if (o.tree_json) out << tree_to_json(m, pf.vars) << '\n';
  SolutionFormula q = emit_formula(m);
  out << (o.smtlib ? q.to_smtlib(pf.vars, o.pure) : q.to_string(&pf.vars)) << '\n';
  return kExitOk;
}

int plot(PrenexFormula pf, const Options& o, std::ostream& out, std::ostream& err) {
  if (pf.free_count == 0) {
    // a sentence: draw the matrix over all of its variables
    pf.free_count = pf.variable_count();
    pf.prefix.clear();
  }
  if (pf.free_count > 2) throw UnsupportedError("plot: " + std::to_string(pf.free_count) + " dimensions");
  NuCadSolver solver(pf, config_of(o));
  NuCadTree t = solver.decompose();
  PlotOptions po;
  po.resolution = o.resolution;
  po.samples = o.samples;
  std::string svg = render_svg(t, pf.vars, pf.free_count, po);
  if (o.output.empty() || o.output == "-") {
    out << svg;
    return kExitOk;
  }
  std::ofstream f(o.output);
  if (!f) {
    err << "cannot write " << o.output << '\n';
    return kExitUsage;
  }
  f << svg;
  return kExitOk;
}

int stats(const ProblemInstance& p, const PrenexFormula& pf, const Options& o, std::ostream& out) {
  bool build_tree = pf.free_count > 0 && p.mode == ProblemMode::Qe;
  NuCadSolver solver(build_tree || pf.free_count == 0 ? pf : existential_closure(pf), config_of(o));
  try {
    if (build_tree) {
      NuCadTree t = solver.decompose();
      SolutionFormula q = emit_formula(merge_tree(t));
      print_stats(out, o, collect_stats(solver.stats(), &t, &q));
    } else {
      solver.decide();
      print_stats(out, o, collect_stats(solver.stats()));
    }
  } catch (const BudgetExceeded&) {
    print_stats(out, o, collect_stats(solver.stats()));
    throw;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Non-uniform cylindrical algebraic decomposition for real arithmetic", "nucad");
  app.require_subcommand(1);
  Options o;
  auto* solve_cmd = app.add_subcommand("solve", "satisfiability, with a witness (free variables read existentially)");
  auto* decide_cmd = app.add_subcommand("decide", "truth of a sentence");
  auto* qe_cmd = app.add_subcommand("qe", "quantifier elimination; prints a solution formula");
  auto* plot_cmd = app.add_subcommand("plot", "SVG picture of a decomposition in one or two dimensions");
  auto* stats_cmd = app.add_subcommand("stats", "run statistics as CSV");
  for (auto* s : {solve_cmd, decide_cmd, qe_cmd, plot_cmd, stats_cmd}) add_common(s, o);
  qe_cmd->add_flag("--smtlib", o.smtlib, "print the formula as an SMT-LIB term");
  qe_cmd->add_flag("--pure", o.pure, "SMT-LIB without root atoms (over-approximates them by existentials)");
  qe_cmd->add_flag("--tree", o.tree, "print the merged tree first");
  qe_cmd->add_flag("--tree-json", o.tree_json, "print the merged tree as JSON first");
  plot_cmd->add_option("-o,--output", o.output, "output file (default standard output)");
  plot_cmd->add_option("--resolution", o.resolution, "grid size in pixels")->check(CLI::Range(2, 4000));
  plot_cmd->add_flag("--samples", o.samples, "mark the sample point of each cell");
  stats_cmd->add_flag("--times", o.times, "include the (non-deterministic) timing columns");
  stats_cmd->add_option("--format", o.format, "csv or text")->check(CLI::IsMember({"csv", "text"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (o.pure) o.smtlib = true;
    ProblemInstance p = parse_smtlib(read_input(o.file));
    PrenexFormula pf = prepare(p, o.order == "degree" ? VarOrdering::Degree : VarOrdering::Input);
    if (solve_cmd->parsed()) return solve(pf, o, out);
    if (decide_cmd->parsed()) return decide(pf, o, out, err);
    if (qe_cmd->parsed()) return qe(pf, o, out);
    if (plot_cmd->parsed()) return plot(pf, o, out, err);
    return stats(p, pf, o, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return kExitUnsupported;
  } catch (const NullificationFailure& e) {
    err << "nullification: " << e.what() << '\n';
    return kExitUnsupported;
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace nucad
