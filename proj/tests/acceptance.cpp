// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "nucad/encode.hpp"
#include "nucad/frontend.hpp"
#include "nucad/oracle.hpp"
#include "nucad/realroots.hpp"

using namespace nucad;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string output;  // everything a rerun must reproduce byte for byte

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

Polynomial P(const char* s) { return Polynomial::parse(s); }
Formula atom(const char* p, Relation r) { return Formula::atom(P(p), r); }

std::vector<Rational> random_rationals(std::mt19937_64& rng, std::size_t n, long range, long den, bool integral) {
  std::uniform_int_distribution<long> num(-range * den, range * den);
  std::vector<Rational> p;
  for (std::size_t k = 0; k < n; ++k) p.push_back(integral ? Rational(num(rng) / den) : make_rational(num(rng), den));
  return p;
}

// ---------------------------------------------------------------- 1

int implicant_violations(const Formula& f, const Implicant& imp, std::size_t n, std::mt19937_64& rng) {
  Formula psi = imp.formula();
  int bad = 0;
  for (int k = 0; k < 10000; ++k) {
    auto p = random_rationals(rng, n, 6, 100, k % 4 == 0);
    if (holds(psi, p) && holds(f, p) != (imp.value == TruthValue::True)) ++bad;
  }
  return bad;
}

Outcome criterion1() {
  Outcome o;
  Formula phi = Formula::conjunction(
      {atom("x1^2", Relation::GT), Formula::disjunction({atom("x1 - 2", Relation::LT), atom("x1 - 4", Relation::GT)})});
  Formula phi2 = Formula::conjunction({Formula::disjunction({atom("x1", Relation::LT), atom("x2 - 4", Relation::LE)}),
                                       Formula::disjunction({atom("x1 - 2", Relation::GT), atom("x2 - 4", Relation::GT)})});
  auto at = [](long v) { return SamplePoint{AlgebraicNumber(v)}; };
  o.require(evaluate(phi, at(1)) == TruthValue::True, "phi[1] is not true");
  o.require(evaluate(phi, at(3)) == TruthValue::False, "phi[3] is not false");
  o.require(evaluate(phi, at(0)) == TruthValue::False, "phi[0] is not false");
  o.require(evaluate(phi2, at(1)) == TruthValue::False, "phi'[1] is not false");
  std::mt19937_64 rng(kOracleSeed);
  int bad = 0;
  for (long s : {1L, 3L, 0L}) {
    Implicant imp = implicant(phi, at(s));
    o.output += imp.formula().to_string() + "\n";
    bad += implicant_violations(phi, imp, 1, rng);
  }
  Implicant imp2 = implicant(phi2, at(1));
  o.output += imp2.formula().to_string() + "\n";
  bad += implicant_violations(phi2, imp2, 2, rng);
  o.require(bad == 0, std::to_string(bad) + " implicant violations");
  o.detail = o.pass ? "4 evaluations, 4 implicants x 10^4 points, 0 violations" : o.detail;
  return o;
}

// ---------------------------------------------------------------- 2

Outcome criterion2() {
  Outcome o;
  Polynomial p1 = P("0.5*x1 + 0.5 - x2"), p2 = P("x1^2 + x2^2 - 1"), p3 = P("0.5*x1 - 0.5 - x2");
  SamplePoint s{AlgebraicNumber(make_rational(1, 8)), AlgebraicNumber(make_rational(-3, 4))};
  CellResult cell = construct_cell(ProjectionSet({p1, p2, p3}), s, 2);
  o.require(cell.intervals.size() == 2, "cell has wrong dimension");
  if (!o.pass) return o;
  const SymbolicInterval& I = cell.intervals[1];
  SymbolicInterval expected;
  expected.level = 2;
  expected.lower = IndexedRoot{2, canonical(p2), 1};
  expected.upper = IndexedRoot{2, canonical(p3), 1};
  o.require(I == expected, "level-2 interval is " + I.to_string());
  bool inside = true;
  SamplePoint prefix;
  for (const auto& J : cell.intervals) {
    auto R = J.realize(prefix);
    inside = inside && R && R->contains(s[prefix.size()]);
    prefix.push_back(s[prefix.size()]);
  }
  o.require(inside, "realized cell misses the sample");
  std::mt19937_64 rng(kOracleSeed);
  int bad = 0;
  for (int k = 0; k < 1000; ++k) {
    SamplePoint x;
    if (!random_point_in(cell.intervals, rng, x)) {
      ++bad;
      continue;
    }
    for (const auto& p : {p1, p2, p3}) bad += sign_at(p, x) != sign_at(p, s);
  }
  o.require(bad == 0, std::to_string(bad) + " sign violations");
  for (const auto& J : cell.intervals) o.output += J.to_string() + "\n";
  if (o.pass) o.detail = "interval " + I.to_string() + ", 10^3 points sign-invariant";
  return o;
}

// ---------------------------------------------------------------- 3

struct TreeCase {
  std::string name;
  PrenexFormula problem;
  NuCadTree tree;
  StatsReport stats;
};

std::vector<TreeCase> g_trees;  // trees of criteria 3 and 5, kept for criterion 7
std::uint64_t g_sections[2] = {0, 0};

Formula example2() {
  return Formula::conjunction({
      atom("-0.006*(x1-2)*(x1+2)*(x1-3)*(x1+3)*(x1-4)*(x1+4) - x2", Relation::LE),
      atom("(x1+2.5)^2 + (x2-1.5)^2 - 0.25", Relation::GT),
      atom("(x1-2.5)^2 + (x2-1.5)^2 - 0.25", Relation::GE),
      atom("x2 - 2.5", Relation::LE),
      atom("x1", Relation::LE),
  });
}

PrenexFormula example2_problem() { return to_prenex(example2(), VarOrder({"x1", "x2"})); }

Outcome criterion3(bool keep) {
  Outcome o;
  PrenexFormula pf = example2_problem();
  for (SplitMode mode : {SplitMode::Classic, SplitMode::Improved}) {
    const char* name = mode == SplitMode::Classic ? "classic" : "improved";
    NuCadSolver solver(pf, {mode});
    NuCadTree t = solver.decompose();
    DecompositionCheck cfg;
    cfg.dimension = 2;
    cfg.box = 6;
    cfg.points = 1000;
    cfg.per_leaf = 100;
    auto truth = [&](const SamplePoint& x) -> std::optional<bool> { return holds(pf.matrix, x); };
    DecompositionReport rep = check_decomposition(t, truth, cfg);
    o.require(rep.ok(), std::string(name) + ": " + rep.to_string());
    StatsReport st = collect_stats(solver.stats(), &t);
    g_sections[mode == SplitMode::Improved] = st.sections;
    o.output += t.to_string(&pf.vars) + st.csv_row(false) + "\n";
    if (keep) g_trees.push_back({std::string("example 2 ") + name, pf, t, st});
  }
  PrenexFormula closed = pf;
  closed.prefix = {Quantifier::Exists, Quantifier::Exists};
  closed.free_count = 0;
  NuCadSolver sat(closed);
  bool v = sat.decide();
  o.require(v, "reported unsat");
  bool witnessed = v && sat.block_witness() && holds(pf.matrix, *sat.block_witness());
  o.require(witnessed, "witness does not satisfy the formula");
  if (sat.block_witness()) o.output += to_string(*sat.block_witness()) + "\n";
  o.require(g_sections[1] < g_sections[0], "improved sections " + std::to_string(g_sections[1]) +
                                               " not below classic " + std::to_string(g_sections[0]));
  if (o.pass)
    o.detail = "both modes verified (10^3 points, 10^2 per leaf), sat with witness " + to_string(*sat.block_witness()) +
               ", sections classic " + std::to_string(g_sections[0]) + " > improved " + std::to_string(g_sections[1]);
  return o;
}

// ---------------------------------------------------------------- 4

std::string random_poly_smt(std::mt19937_64& rng) {
  std::string out = "(+";
  int terms = 2 + static_cast<int>(rng() % 3);
  for (int k = 0; k < terms; ++k) {
    int a = static_cast<int>(rng() % 4), b = static_cast<int>(rng() % (4 - a));
    long c = static_cast<long>(rng() % 7) - 3;
    if (c == 0) c = 1;
    std::string t = "(* " + (c < 0 ? "(- " + std::to_string(-c) + ")" : std::to_string(c));
    for (int i = 0; i < a; ++i) t += " x";
    for (int i = 0; i < b; ++i) t += " y";
    out += " " + t + ")";
  }
  return out + ")";
}

std::string random_sentence(std::mt19937_64& rng) {
  const char* rels[] = {"<", "<=", ">", ">=", "=", "distinct"};
  auto a = [&] { return std::string("(") + rels[rng() % 6] + " " + random_poly_smt(rng) + " 0)"; };
  std::string body = rng() % 2 ? a() : std::string(rng() % 2 ? "(and " : "(or ") + a() + " " + a() + ")";
  const char* q1 = rng() % 2 ? "exists" : "forall";
  const char* q2 = rng() % 2 ? "exists" : "forall";
  return std::string("(assert (") + q1 + " ((x Real)) (" + q2 + " ((y Real)) " + body + ")))";
}

Outcome criterion4() {
  Outcome o;
  std::vector<std::pair<std::string, bool>> known = {
      {"(assert (exists ((x Real)) (<= (* x x) 0)))", true},
      {"(assert (forall ((x Real)) (exists ((y Real)) (= (* y y y) x))))", true},
      {"(assert (forall ((x Real)) (exists ((y Real)) (= (* y y) x))))", false},
      {"(assert (exists ((x Real)) (forall ((y Real)) (> (+ (* y y) 1) x))))", true},
      {"(assert (forall ((x Real)) (> (+ (* x x) 1) 0)))", true},
      {"(assert (forall ((x Real)) (or (> x 0) (<= x 0))))", true},
      {"(assert (forall ((x Real)) (>= (* x x) 0)))", true},
      {"(assert (exists ((x Real)) (= (+ (* x x) 1) 0)))", false},
      {"(assert (forall ((x Real) (y Real)) (>= (+ (* x x) (* y y)) (* 2 x y))))", true},
      {"(assert (exists ((x Real) (y Real)) (< (+ (* x x) (* y y)) 0)))", false},
      {"(assert (forall ((x Real)) (exists ((y Real)) (= (* x y) 1))))", false},
      {"(assert (exists ((x Real)) (forall ((y Real)) (= (* x y) 0))))", true},
      {"(assert (forall ((x Real)) (exists ((y Real)) (> y (* x x)))))", true},
      {"(assert (exists ((y Real)) (forall ((x Real)) (> y (* x x)))))", false},
      {"(assert (forall ((x Real)) (exists ((y Real)) (and (> y x) (< (* y y) (+ (* x x) 1))))))", true},
      {"(assert (exists ((x Real)) (and (> x 0) (< (* x x x) (- 1)))))", false},
  };
  int agree = 0, total = 0;
  std::string mismatches;
  for (const auto& [text, expected] : known) {
    NuCadSolver solver(prepare(parse_smtlib(text)));
    bool v = solver.decide();
    ++total;
    agree += v == expected;
    if (v != expected) mismatches += " " + text;
    o.output += v ? "1" : "0";
  }
  std::mt19937_64 rng(kOracleSeed);
  int random_checked = 0;
  for (int attempt = 0; attempt < 200 && random_checked < 12; ++attempt) {
    ProblemInstance p = parse_smtlib(random_sentence(rng));
    PrenexFormula pf = prepare(p);
    OracleAnswer ans = oracle_quantified(pf, {});
    if (!ans.certain) continue;
    NuCadSolver solver(pf);
    bool v = solver.decide();
    ++total;
    ++random_checked;
    agree += v == ans.value;
    if (v != ans.value) mismatches += " " + print_smtlib(p);
    o.output += v ? "1" : "0";
  }
  o.require(total >= 20, "only " + std::to_string(total) + " sentences");
  o.require(agree == total, "disagreements:" + mismatches);
  if (o.pass)
    o.detail = std::to_string(total) + " sentences (" + std::to_string(random_checked) +
               " randomized, oracle-certain), 100% agreement";
  return o;
}

// ---------------------------------------------------------------- 5

Outcome criterion5(bool keep) {
  Outcome o;
  std::vector<std::string> instances = {
      "(exists ((y Real)) (< (+ (* x x) (* y y)) 1))",
      "(exists ((y Real)) (= (* y y) x))",
      "(exists ((y Real)) (= (* x y) 1))",
      "(forall ((y Real)) (> (+ (* y y) (* x y) 1) 0))",
      "(exists ((y Real)) (and (= (- (* y y y) y) x) (> y 0)))",
      "(forall ((y Real)) (>= (* (- y x) (- y x)) x))",
      "(exists ((y Real)) (and (= (+ (* x x) (* y y)) 4) (> y x)))",
      "(exists ((y Real)) (and (< (* y y) x) (> y (- x 2))))",
      "(forall ((y Real)) (>= (+ (* y y) (* (- 2) x y) 1) 0))",
      "(exists ((y Real)) (= (+ (* x y y) (- y) x) 0))",
      "(exists ((y Real)) (and (<= (+ (* y y) (* x x)) 1) (> (* x y) 0.25)))",
      "(forall ((y Real)) (> (+ (* x y y) 1) 0))",
  };
  std::mt19937_64 rng(kOracleSeed);
  std::size_t total_bad = 0;
  for (const auto& body : instances) {
    ProblemInstance p = parse_smtlib("(declare-const x Real)(assert " + body + ")(eliminate-quantifiers)");
    PrenexFormula pf = prepare(p);
    NuCadSolver solver(pf);
    NuCadTree t = solver.decompose();
    SolutionFormula q = emit_formula(merge_tree(t));
    StatsReport st = collect_stats(solver.stats(), &t, &q);
    o.output += q.to_string(&pf.vars) + "\n" + st.csv_row(false) + "\n";
    std::size_t bad = 0;
    for (int k = 0; k < 10000; ++k) {
      Rational x = random_rationals(rng, 1, 4, k % 10 == 0 ? 4 : 1024, false)[0];
      OracleAnswer ans = oracle_quantified(pf, {}, {x});
      bad += !ans.certain || q.holds(SamplePoint{AlgebraicNumber(x)}) != ans.value;
    }
    if (bad) o.require(false, body + ": " + std::to_string(bad) + " violations");
    total_bad += bad;
    if (body == instances.front()) {
      o.require(!q.has_root_atoms(), "disc formula has root atoms: " + q.to_string(&pf.vars));
      for (long v : {-1L, 1L}) o.require(!q.holds(SamplePoint{AlgebraicNumber(v)}), "disc formula holds at +-1");
    }
    if (keep) g_trees.push_back({body, pf, t, st});
  }
  if (o.pass)
    o.detail = std::to_string(instances.size()) + " instances x 10^4 points, 0 violations (disc: " + [&] {
      PrenexFormula pf = prepare(parse_smtlib("(declare-const x Real)(assert " + instances[0] + ")"));
      NuCadSolver s(pf);
      return emit_formula(merge_tree(s.decompose())).to_string(&pf.vars);
    }() + ")";
  return o;
}

// ---------------------------------------------------------------- 6

Polynomial random_univariate(std::mt19937_64& rng) {
  Polynomial p;
  unsigned d = 1 + static_cast<unsigned>(rng() % 6);
  for (unsigned k = 0; k <= d; ++k) {
    long c = static_cast<long>(rng() % 7) - 3;
    if (k == d && c == 0) c = 1;
    p += Polynomial::monomial(Exponents{k}, Rational(c));
  }
  return p;
}

Formula random_univariate_formula(std::mt19937_64& rng) {
  const Relation rels[] = {Relation::LT, Relation::LE, Relation::GT, Relation::GE, Relation::EQ, Relation::NE};
  std::vector<Formula> parts;
  int atoms = 1 + static_cast<int>(rng() % 5);
  for (int k = 0; k < atoms; ++k) parts.push_back(Formula::atom(random_univariate(rng), rels[rng() % 6]));
  while (parts.size() > 1) {
    Formula b = parts.back();
    parts.pop_back();
    Formula a = parts.back();
    parts.pop_back();
    Formula c = rng() % 2 ? Formula::conjunction({a, b}) : Formula::disjunction({a, b});
    if (rng() % 5 == 0) c = Formula::negation(c);
    parts.push_back(c);
  }
  return parts.front();
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(kOracleSeed);
  for (int k = 0; k < 200; ++k) {
    Formula f = random_univariate_formula(rng);
    auto regions = oracle_1d(f);
    for (SplitMode mode : {SplitMode::Classic, SplitMode::Improved}) {
      NuCadSolver solver(to_prenex(f, VarOrder({"x1"})), {mode});
      if (first_difference_1d(solver.decompose(), regions)) o.require(false, f.to_string());
    }
  }
  if (o.pass) o.detail = "200 formulas, both modes, exact agreement at every end point and gap";
  return o;
}

// ---------------------------------------------------------------- 7

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(kOracleSeed);
  for (const auto& c : g_trees) {
    NuCadTree m = merge_tree(c.tree);
    SolutionFormula q = emit_formula(m);
    std::size_t dim = c.problem.free_count;
    int merge_bad = 0, emit_bad = 0;
    for (int k = 0; k < 1000; ++k) {
      SamplePoint x;
      for (const auto& r : random_rationals(rng, dim, 6, 4096, false)) x.emplace_back(r);
      bool l = label_at(c.tree, x);
      merge_bad += label_at(m, x) != l;
      emit_bad += q.holds(x) != l;
    }
    if (merge_bad || emit_bad)
      o.require(false, c.name + ": merge " + std::to_string(merge_bad) + ", emit " + std::to_string(emit_bad));
  }
  if (o.pass) o.detail = std::to_string(g_trees.size()) + " trees x 10^3 points, 0 violations";
  return o;
}

// ---------------------------------------------------------------- 8

Outcome criterion8() {
  Outcome o;
  std::string header = StatsReport::csv_header(true);
  for (const char* col : {"atoms", "cells", "symbolic_intervals", "sections", "real_root_seconds",
                          "non_algebraic_seconds"})
    o.require(header.find(col) != std::string::npos, std::string("missing column ") + col);
  auto fields = [](const std::string& s) { return std::count(s.begin(), s.end(), ',') + 1; };
  for (const auto& c : g_trees) {
    o.require(fields(c.stats.csv_row(true)) == fields(header), c.name + ": row does not match header");
    o.require(c.stats.cells > 0 && c.stats.symbolic_intervals > 0, c.name + ": empty stats");
  }
  o.require(g_sections[0] > g_sections[1], "classic sections not above improved");
  if (o.pass)
    o.detail = "columns " + header + "; example 2 sections classic " + std::to_string(g_sections[0]) + " > improved " +
               std::to_string(g_sections[1]);
  return o;
}

// ---------------------------------------------------------------- 9

Outcome criterion9(const std::vector<std::string>& first) {
  Outcome o;
  std::vector<std::string> second = {criterion2().output, criterion3(false).output, criterion4().output,
                                     criterion5(false).output};
  for (std::size_t k = 0; k < first.size(); ++k)
    o.require(first[k] == second[k], "criterion " + std::to_string(k + 2) + " output differs on rerun");
  std::size_t bytes = 0;
  for (const auto& s : first) bytes += s.size();
  if (o.pass) o.detail = "criteria 2-5 reproduced byte for byte (" + std::to_string(bytes) + " bytes)";
  return o;
}

// ---------------------------------------------------------------- 10

Outcome criterion10() {
  Outcome o;
  PrenexFormula pf = example2_problem();
  for (SplitMode mode : {SplitMode::Classic, SplitMode::Improved}) {
    NuCadSolver seq(pf, {mode});
    SolverConfig cfg{mode};
    cfg.threads = 4;
    NuCadSolver par(pf, cfg);
    std::string a = seq.decompose().to_string(&pf.vars), b = par.decompose().to_string(&pf.vars);
    o.require(a == b, mode == SplitMode::Classic ? "classic trees differ" : "improved trees differ");
    o.require(seq.stats().cells == par.stats().cells, "cell counts differ");
  }
  if (o.pass) o.detail = "4 threads, both modes, identical trees and cell counts";
  return o;
}

}  // namespace

int main() {
  int failed = 0;
  std::vector<std::string> outputs;
  auto run = [&](int id, double limit, const std::function<Outcome()>& fn) {
    auto start = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (limit > 0 && secs >= limit) {
      o.pass = false;
      o.detail += " (limit " + std::to_string(limit) + " s exceeded)";
    }
    if (id >= 2 && id <= 5) outputs.push_back(o.output);
    failed += !o.pass;
    std::printf("criterion %d: %s (%.2f s) %s\n", id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  };
  run(1, 1, criterion1);
  run(2, 5, criterion2);
  run(3, 60, [] { return criterion3(true); });
  run(4, 60, criterion4);
  run(5, 120, [] { return criterion5(true); });
  run(6, 60, criterion6);
  run(7, 0, criterion7);
  run(8, 0, criterion8);
  run(9, 0, [&] { return criterion9(outputs); });
  run(10, 0, criterion10);
  std::printf("%d of 10 criteria failed\n", failed);
  return failed;
}
