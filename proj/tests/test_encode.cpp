#include <doctest.h>

#include <random>

#include "nucad/encode.hpp"
#include "nucad/oracle.hpp"

using namespace nucad;

namespace {

Polynomial P(const char* s) { return Polynomial::parse(s); }

PrenexFormula problem(Formula f, std::vector<std::pair<Quantifier, std::size_t>> binders, std::size_t n) {
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) f = Formula::quantified(it->first, it->second, f);
  std::vector<std::string> names;
  for (std::size_t k = 1; k <= n; ++k) names.push_back("x" + std::to_string(k));
  return to_prenex(f, VarOrder(names));
}

Formula example2() {
  auto a = [](const char* p, Relation r) { return Formula::atom(P(p), r); };
  return Formula::conjunction({
      a("-0.006*(x1-2)*(x1+2)*(x1-3)*(x1+3)*(x1-4)*(x1+4) - x2", Relation::LE),
      a("(x1+2.5)^2 + (x2-1.5)^2 - 0.25", Relation::GT),
      a("(x1-2.5)^2 + (x2-1.5)^2 - 0.25", Relation::GE),
      a("x2 - 2.5", Relation::LE),
      a("x1", Relation::LE),
  });
}

SamplePoint random_point(std::mt19937_64& rng, std::size_t dim, double box) {
  std::uniform_real_distribution<double> u(-box, box);
  SamplePoint x;
  for (std::size_t d = 0; d < dim; ++d) {
    Rational q(static_cast<long>(u(rng) * 4096));
    q /= 4096;
    x.emplace_back(q);
  }
  return x;
}

std::size_t count_nodes(const NuCadTree& t) {
  std::size_t n = 1;
  for (const auto& c : t.children) n += count_nodes(c);
  return n;
}

}  // namespace

TEST_CASE("merge_tree collapses uniform subtrees and keeps labels") {
  Formula f = example2();
  for (SplitMode mode : {SplitMode::Classic, SplitMode::Improved}) {
    NuCadSolver solver(problem(f, {}, 2), {mode});
    NuCadTree t = solver.decompose();
    NuCadTree m = merge_tree(t);
    CHECK(m.leaf_count() < t.leaf_count());
    CHECK(merge_tree(m).to_string() == m.to_string());
    std::mt19937_64 rng(kOracleSeed);
    int bad = 0;
    for (int k = 0; k < 1000; ++k) {
      SamplePoint x = random_point(rng, 2, 6);
      bad += label_at(t, x) != label_at(m, x);
    }
    CHECK(bad == 0);
    // every leaf cell still decomposes the plane
    auto truth = [&](const SamplePoint& x) -> std::optional<bool> { return holds(f, x); };
    DecompositionCheck cfg;
    cfg.dimension = 2;
    cfg.per_leaf = 20;
    CHECK(check_decomposition(m, truth, cfg).ok());
  }
}

TEST_CASE("merge_tree on a section with three FALSE cells") {
  // the cell x1 = 0 split by x2 = 5/2 into three FALSE cells, between two TRUE cells
  IndexedRoot r5{1, P("x1"), 1};
  IndexedRoot r4{2, P("2*x2 - 5"), 1};
  auto sector = [](std::size_t level, std::optional<IndexedRoot> lo, std::optional<IndexedRoot> hi) {
    SymbolicInterval I;
    I.level = level;
    I.lower = std::move(lo);
    I.upper = std::move(hi);
    return I;
  };
  NuCadTree t = NuCadTree::branch({}, 2);
  SamplePoint left{AlgebraicNumber(-1), AlgebraicNumber(0)}, right{AlgebraicNumber(1), AlgebraicNumber(0)};
  insert_path(t, {sector(1, std::nullopt, r5), SymbolicInterval::full(2)}, NuCadTree::leaf(true, left), left);
  for (auto I : {sector(2, std::nullopt, r4), SymbolicInterval::section(r4), sector(2, r4, std::nullopt)}) {
    SamplePoint s{AlgebraicNumber(0), I.realize({AlgebraicNumber(0)})->sample()};
    insert_path(t, {SymbolicInterval::section(r5), I}, NuCadTree::leaf(false, s), s);
  }
  insert_path(t, {sector(1, r5, std::nullopt), SymbolicInterval::full(2)}, NuCadTree::leaf(true, right), right);
  REQUIRE(t.leaf_count() == 5);
  NuCadTree m = merge_tree(t);
  REQUIRE(m.children.size() == 3);
  CHECK(m.children[1].interval == SymbolicInterval::section(r5));
  CHECK(m.children[1].is_leaf());
  CHECK(m.children[1].label == false);
  CHECK(m.leaf_count() == 3);
  SolutionFormula q = emit_formula(m);
  CHECK(q.to_string() == "x1 != 0");
}

TEST_CASE("merge_tree trivial cases") {
  NuCadTree leaf = NuCadTree::leaf(true, {});
  CHECK(merge_tree(leaf).to_string() == "TRUE\n");

  // alternating labels along x1 = 0 stay apart
  Formula f = Formula::atom(P("x1"), Relation::EQ);
  NuCadSolver solver(problem(f, {}, 1), {SplitMode::Classic});
  NuCadTree t = solver.decompose();
  NuCadTree m = merge_tree(t);
  CHECK(m.leaf_count() == 3);
  CHECK(count_nodes(m) <= count_nodes(t));
}

TEST_CASE("emit_formula constants") {
  NuCadSolver a(problem(Formula::atom(P("x1^2 + 1"), Relation::GT), {}, 1));
  CHECK(emit_formula(merge_tree(a.decompose())).kind() == SolutionFormula::Kind::True);
  NuCadSolver b(problem(Formula::atom(P("x1^2 + 1"), Relation::LT), {}, 1));
  CHECK(emit_formula(merge_tree(b.decompose())).kind() == SolutionFormula::Kind::False);
}

TEST_CASE("quantifier elimination of the unit disc") {
  auto f = problem(Formula::atom(P("x1^2 + x2^2 - 1"), Relation::LT), {{Quantifier::Exists, 2}}, 2);
  NuCadSolver solver(f);
  NuCadTree t = merge_tree(solver.decompose());
  SolutionFormula q = emit_formula(t);
  INFO(q.to_string());
  CHECK_FALSE(q.has_root_atoms());
  std::mt19937_64 rng(kOracleSeed);
  int bad = 0;
  for (int k = 0; k < 10000; ++k) {
    SamplePoint x = random_point(rng, 1, 3);
    bool expected = compare(x[0], AlgebraicNumber(-1)) > 0 && compare(x[0], AlgebraicNumber(1)) < 0;
    bad += q.holds(x) != expected;
  }
  CHECK(bad == 0);
  for (long v : {-1L, 1L}) CHECK_FALSE(q.holds(SamplePoint{AlgebraicNumber(v)}));
  CHECK(q.holds(SamplePoint{AlgebraicNumber(0)}));
  CHECK(q.atom_count() <= 4);
}

TEST_CASE("emit_formula is pointwise equivalent to the tree") {
  std::vector<PrenexFormula> cases = {
      problem(example2(), {}, 2),
      problem(Formula::atom(P("x2^2 - x1"), Relation::EQ), {{Quantifier::Exists, 2}}, 2),
      problem(Formula::atom(P("x1*x2 - 1"), Relation::GT), {{Quantifier::Exists, 2}}, 2),
      problem(Formula::disjunction({Formula::atom(P("x1^2 + x2^2 - 4"), Relation::LT),
                                    Formula::atom(P("x2 - x1^3"), Relation::GT)}),
              {}, 2),
  };
  for (const auto& pf : cases) {
    NuCadSolver solver(pf);
    NuCadTree t = solver.decompose();
    NuCadTree m = merge_tree(t);
    SolutionFormula q = emit_formula(m);
    INFO(q.to_string(&pf.vars));
    std::mt19937_64 rng(kOracleSeed);
    int bad = 0;
    for (int k = 0; k < 2000; ++k) {
      SamplePoint x = random_point(rng, pf.free_count, 6);
      bad += q.holds(x) != label_at(t, x);
    }
    CHECK(bad == 0);
    // points on cell boundaries: leaf samples of the unmerged tree
    for (const auto& leaf : leaf_cells(t)) CHECK(q.holds(leaf.leaf->sample) == leaf.label);
  }
}

TEST_CASE("interval atoms use constraints where possible") {
  SymbolicInterval I;
  I.level = 1;
  I.lower = IndexedRoot{1, P("x1^2 - 4"), 1};
  I.upper = IndexedRoot{1, P("x1^2 - 2"), 2};
  auto atoms = interval_atoms(I);
  REQUIRE(atoms.size() == 2);
  CHECK(atoms[0].kind() == SolutionFormula::Kind::Constraint);
  CHECK(atoms[0].to_string() == "x1 + 2 > 0");
  CHECK(atoms[1].kind() == SolutionFormula::Kind::Root);
  CHECK(atoms[1].to_string() == "x1 < root(x1, x1^2 - 2, 2)");

  SymbolicInterval J = SymbolicInterval::section(IndexedRoot{2, P("x2 - x1^2"), 1});
  auto lin = interval_atoms(J);
  REQUIRE(lin.size() == 1);
  CHECK(lin[0].to_string() == "x2 - x1^2 = 0");
}

TEST_CASE("SMT-LIB output") {
  VarOrder vars({"a", "b"});
  auto c = SolutionFormula::constraint(Constraint{P("x1^2 - 3/2*x2"), Relation::NE});
  CHECK(c.to_smtlib(vars) == "(not (= (+ (* (- (/ 3 2)) b) (* a a)) 0))");
  auto r = SolutionFormula::root_atom(RootAtom{2, Relation::LT, IndexedRoot{2, P("x2^2 - x1"), 2}});
  CHECK(r.to_smtlib(vars) == "(< b (root b (+ (* b b) (- a)) 2))");
  CHECK(r.to_smtlib(vars, true) == "(exists ((y!1 Real)) (and (= (+ (* y!1 y!1) (- a)) 0) (< b y!1)))");
}

TEST_CASE("stats report") {
  NuCadSolver solver(problem(example2(), {}, 2), {SplitMode::Improved});
  NuCadTree t = solver.decompose();
  SolutionFormula q = emit_formula(merge_tree(t));
  StatsReport r = collect_stats(solver.stats(), &t, &q);
  CHECK(r.atoms == q.atom_count());
  CHECK(r.cells >= 3);
  CHECK(r.sections > 0);
  CHECK(r.leaves == t.leaf_count());
  CHECK(StatsReport::csv_header() ==
        "atoms,cells,leaves,symbolic_intervals,sections,real_root_seconds,non_algebraic_seconds,total_seconds,aborted");
  CHECK(r.csv_row(false).rfind(",false") != std::string::npos);
  CHECK(r.to_text().find("real-root time") != std::string::npos);

  NuCadSolver trivial(problem(Formula::atom(P("x1^2 + 1"), Relation::GT), {}, 1));
  trivial.decompose();
  StatsReport tr = collect_stats(trivial.stats());
  CHECK(tr.cells == 1);
  CHECK(tr.sections == 0);
}
