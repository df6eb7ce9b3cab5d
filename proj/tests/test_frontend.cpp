#include <doctest.h>

#include <json.hpp>
#include <random>

#include "nucad/errors.hpp"
#include "nucad/frontend.hpp"
#include "nucad/oracle.hpp"

using namespace nucad;

namespace {

Polynomial P(const char* s) { return Polynomial::parse(s); }

const char* kExample2 = R"(
(set-logic QF_NRA)
(declare-const x1 Real)
(declare-const x2 Real)
; a sextic, two discs, a line and a half plane
(assert (and (<= (- (* (- 0.006) (- x1 2) (+ x1 2) (- x1 3) (+ x1 3) (- x1 4) (+ x1 4)) x2) 0)
             (> (- (+ (* (+ x1 2.5) (+ x1 2.5)) (* (- x2 1.5) (- x2 1.5))) 0.25) 0)
             (>= (- (+ (* (- x1 2.5) (- x1 2.5)) (* (- x2 1.5) (- x2 1.5))) 0.25) 0)
             (<= (- x2 2.5) 0)
             (<= x1 0)))
(check-sat)
)";

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

void check_round_trip(const std::string& text) {
  ProblemInstance p = parse_smtlib(text);
  std::string printed = print_smtlib(p);
  INFO(printed);
  ProblemInstance q = parse_smtlib(printed);
  CHECK(q == p);
  CHECK(print_smtlib(q) == printed);
}

std::string random_term(std::mt19937_64& rng, int depth) {
  const char* vars[] = {"a", "b", "c"};
  if (depth == 0 || rng() % 3 == 0) {
    switch (rng() % 3) {
      case 0: return vars[rng() % 3];
      case 1: return std::to_string(rng() % 5);
      default: return "(- " + std::to_string(rng() % 4) + ".25)";
    }
  }
  const char* ops[] = {"+", "-", "*"};
  return std::string("(") + ops[rng() % 3] + " " + random_term(rng, depth - 1) + " " + random_term(rng, depth - 1) + ")";
}

std::string random_bool(std::mt19937_64& rng, int depth) {
  const char* rels[] = {"<", "<=", ">", ">=", "=", "distinct"};
  if (depth == 0 || rng() % 3 == 0)
    return std::string("(") + rels[rng() % 6] + " " + random_term(rng, 2) + " " + random_term(rng, 2) + ")";
  switch (rng() % 5) {
    case 0: return "(not " + random_bool(rng, depth - 1) + ")";
    case 1: return "(and " + random_bool(rng, depth - 1) + " " + random_bool(rng, depth - 1) + ")";
    case 2: return "(or " + random_bool(rng, depth - 1) + " " + random_bool(rng, depth - 1) + ")";
    case 3: return "(exists ((c Real)) " + random_bool(rng, depth - 1) + ")";
    default: return "(forall ((c Real)) " + random_bool(rng, depth - 1) + ")";
  }
}

}  // namespace

TEST_CASE("parse a quantifier-free script") {
  auto p = parse_smtlib("(declare-const x Real)(assert (> (* x x) 0))(check-sat)");
  CHECK_FALSE(p.quantified);
  CHECK(p.mode == ProblemMode::Sat);
  CHECK(p.declared == 1);
  CHECK(p.vars == VarOrder({"x"}));
  CHECK(p.assertion == Formula::atom(P("x1^2"), Relation::GT));
}

TEST_CASE("decimals are read exactly") {
  auto p = parse_smtlib(kExample2);
  REQUIRE(p.assertion.kind() == Formula::Kind::And);
  const Constraint& c = p.assertion.children()[0].constraint();
  CHECK(c.lhs.coefficient(1, 6) == Polynomial::constant(Rational(-3, 500)));
  CHECK(p.assertion.children()[3].constraint().lhs == P("x2 - 5/2"));
  // pointwise agreement with the formula built directly
  Formula g = example2();
  std::mt19937_64 rng(kOracleSeed);
  for (int k = 0; k < 500; ++k) {
    std::vector<Rational> x{Rational(static_cast<long>(rng() % 4001) - 2000, 250),
                            Rational(static_cast<long>(rng() % 4001) - 2000, 500)};
    CHECK(holds(p.assertion, x) == holds(g, x));
  }
  check_round_trip(kExample2);
}

TEST_CASE("binders become a prenex block") {
  auto p = parse_smtlib("(declare-const x Real)(assert (exists ((y Real)) (= (* y y) x)))(check-sat)");
  CHECK(p.quantified);
  CHECK(p.declared == 1);
  PrenexFormula pf = prepare(p);
  CHECK(pf.free_count == 1);
  REQUIRE(pf.prefix.size() == 1);
  CHECK(pf.prefix[0] == Quantifier::Exists);
  CHECK(pf.vars.name(2) == "y");

  auto s = parse_smtlib("(assert (forall ((x Real)) (exists ((y Real)) (= (* y y) x))))(check-sat)");
  CHECK(s.mode == ProblemMode::Decide);
  NuCadSolver solver(prepare(s));
  CHECK_FALSE(solver.decide());
}

TEST_CASE("shadowing, let and derived connectives") {
  auto p = parse_smtlib(R"((declare-const x Real)
    (assert (and (> x 0) (exists ((x Real)) (< x 0)) (exists ((y Real)) (= y 1)) (exists ((y Real)) (= y 2))))
    (eliminate-quantifiers))");
  CHECK(p.mode == ProblemMode::Qe);
  CHECK(p.vars == VarOrder({"x", "x_1", "y"}));

  auto l = parse_smtlib("(declare-const x Real)(assert (let ((t (* x x)) (b (> x 1))) (and b (< t 4))))");
  CHECK(l.assertion == Formula::conjunction({Formula::atom(P("x1 - 1"), Relation::GT),
                                             Formula::atom(P("x1^2 - 4"), Relation::LT)}));

  auto c = parse_smtlib("(declare-const x Real)(assert (< 0 x 1 2))");
  CHECK(c.assertion.atom_count() == 3);

  auto i = parse_smtlib("(declare-const x Real)(assert (=> (> x 0) (> x 1)))");
  CHECK(i.assertion.kind() == Formula::Kind::Or);

  auto d = parse_smtlib("(declare-fun x () Real)(assert (distinct x 1 2))");
  CHECK(d.assertion.atom_count() == 3);
  for (const auto& a : atoms(d.assertion)) CHECK(a.rel == Relation::NE);

  auto q = parse_smtlib("(declare-const |odd name| Real)(assert (> (/ |odd name| 4) (to_real 1)))");
  CHECK(q.assertion == Formula::atom(P("1/4*x1 - 1"), Relation::GT));
  CHECK(print_smtlib(q).find("|odd name|") != std::string::npos);
}

TEST_CASE("round trip") {
  check_round_trip("(declare-const x Real)(assert (> (* x x) 0))(check-sat)");
  check_round_trip("(declare-const x Real)(assert (exists ((x Real)) (< x 0)))(eliminate-quantifiers)");
  check_round_trip("(assert (forall ((x Real)) (exists ((y Real)) (= (* y y y) x))))");
  check_round_trip("(declare-const a Real)(assert (or (distinct a 1) (not (<= (/ a 3) (- 2.75)))))");
  check_round_trip("(declare-const a Real)");
  std::mt19937_64 rng(kOracleSeed);
  for (int k = 0; k < 100; ++k) {
    std::string script = "(declare-const a Real)(declare-const b Real)(declare-const c Real)(assert " + random_bool(rng, 4) + ")";
    INFO(script);
    check_round_trip(script);
  }
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_smtlib("(declare-const x Real)\n(assert (> x 0)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 1);
  }
  try {
    parse_smtlib("(declare-const x Real)\n(assert (> x  z))");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 15);
    CHECK(std::string(e.what()).find("unknown symbol 'z'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_smtlib(")"), ParseError);
  CHECK_THROWS_AS(parse_smtlib("(declare-const x Foo)"), ParseError);
  CHECK_THROWS_AS(parse_smtlib("(declare-const x Real)(assert (+ x 1))"), ParseError);
  CHECK_THROWS_AS(parse_smtlib("(declare-const x Real)(assert (> (+ x (> x 1)) 1))"), ParseError);
  CHECK_THROWS_AS(parse_smtlib("(declare-const x Real)(assert (> x 1.2.3))"), ParseError);
  CHECK_THROWS_AS(parse_smtlib("(frobnicate)"), ParseError);
  CHECK_THROWS_AS(parse_smtlib("(assert (exists ((y Real)) (> y 0)))(eliminate-quantifiers)"), ParseError);
}

TEST_CASE("unsupported input") {
  CHECK_THROWS_AS(parse_smtlib("(declare-const x Int)"), UnsupportedError);
  CHECK_THROWS_AS(parse_smtlib("(declare-fun f (Real) Real)"), UnsupportedError);
  CHECK_THROWS_AS(parse_smtlib("(declare-const x Real)(declare-const y Real)(assert (> (/ x y) 1))"),
                  UnsupportedError);
  CHECK_THROWS_AS(parse_smtlib("(declare-const x Real)(assert (> (sin x) 0))"), UnsupportedError);
  CHECK_THROWS_AS(parse_smtlib("(declare-const x Real)(assert (> (/ x 0) 0))"), UnsupportedError);
  CHECK_THROWS_AS(parse_smtlib("(push 1)"), UnsupportedError);
}

TEST_CASE("degree variable ordering") {
  auto p = parse_smtlib("(declare-const y Real)(declare-const x Real)(assert (> (+ (* y y y) x) 0))");
  PrenexFormula in = prepare(p, VarOrdering::Input);
  CHECK(in.vars == VarOrder({"y", "x"}));
  PrenexFormula deg = prepare(p, VarOrdering::Degree);
  CHECK(deg.vars == VarOrder({"x", "y"}));
  CHECK(deg.matrix == Formula::atom(P("x2^3 + x1"), Relation::GT));
  // same set either way
  std::mt19937_64 rng(kOracleSeed);
  for (int k = 0; k < 200; ++k) {
    Rational a(static_cast<long>(rng() % 81) - 40, 8), b(static_cast<long>(rng() % 81) - 40, 8);
    CHECK(holds(in.matrix, std::vector<Rational>{a, b}) == holds(deg.matrix, std::vector<Rational>{b, a}));
  }
}

TEST_CASE("svg rendering") {
  auto p = parse_smtlib(kExample2);
  PrenexFormula pf = prepare(p);
  NuCadSolver solver(pf);
  NuCadTree t = solver.decompose();
  PlotOptions opt;
  opt.samples = true;
  std::string svg = render_svg(t, pf.vars, 2, opt);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("#5cb85c") != std::string::npos);
  CHECK(svg.find("#d9534f") != std::string::npos);
  CHECK(svg.find("#222222") != std::string::npos);
  std::size_t circles = 0;
  for (auto k = svg.find("<circle"); k != std::string::npos; k = svg.find("<circle", k + 1)) ++circles;
  CHECK(circles >= 1);
  CHECK(circles <= t.leaf_count());

  NuCadSolver top(prepare(parse_smtlib("(declare-const a Real)(declare-const b Real)(assert true)")));
  std::string green = render_svg(top.decompose(), VarOrder({"a", "b"}), 2);
  CHECK(green.find("#d9534f") == std::string::npos);
  CHECK(green.find("#5cb85c") != std::string::npos);
  CHECK(green.find("in [-5, 5]") != std::string::npos);

  NuCadSolver line(prepare(parse_smtlib("(declare-const a Real)(assert (< (* a a) 2))")));
  std::string strip = render_svg(line.decompose(), VarOrder({"a"}), 1);
  CHECK(strip.find("#5cb85c") != std::string::npos);
  CHECK(strip.find("#d9534f") != std::string::npos);

  CHECK_THROWS_AS(render_svg(t, pf.vars, 3), UnsupportedError);
}

TEST_CASE("structured tree dump") {
  PrenexFormula pf = prepare(parse_smtlib(kExample2));
  NuCadSolver solver(pf);
  NuCadTree t = solver.decompose();
  auto j = nlohmann::json::parse(tree_to_json(t, pf.vars));
  std::size_t leaves = 0;
  std::function<void(const nlohmann::json&)> walk = [&](const nlohmann::json& n) {
    if (n.contains("label")) {
      ++leaves;
      CHECK(n["sample"].size() == 2);
      return;
    }
    for (const auto& c : n["children"]) {
      CHECK(c.contains("interval"));
      walk(c);
    }
  };
  walk(j);
  CHECK(leaves == t.leaf_count());
}

TEST_CASE("existential block witness") {
  auto p = parse_smtlib(kExample2);
  PrenexFormula pf = prepare(p);
  Formula closed = pf.matrix;
  for (std::size_t l = pf.free_count; l >= 1; --l) closed = Formula::quantified(Quantifier::Exists, l, closed);
  NuCadSolver solver(to_prenex(closed, pf.vars));
  REQUIRE(solver.decide());
  REQUIRE(solver.block_witness());
  CHECK(holds(pf.matrix, *solver.block_witness()));
}
