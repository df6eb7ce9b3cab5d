#include <doctest.h>

#include <random>

#include "nucad/errors.hpp"
#include "nucad/nucad.hpp"
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

Polynomial random_univariate(std::mt19937_64& rng, unsigned max_degree) {
  Polynomial p;
  unsigned d = 1 + static_cast<unsigned>(rng() % max_degree);
  for (unsigned k = 0; k <= d; ++k) {
    long c = static_cast<long>(rng() % 7) - 3;
    if (k == d && c == 0) c = 1;
    p += Polynomial::monomial(Exponents{k}, Rational(c));
  }
  return p;
}

Formula random_formula(std::mt19937_64& rng, int atoms) {
  const Relation rels[] = {Relation::LT, Relation::LE, Relation::GT, Relation::GE, Relation::EQ, Relation::NE};
  std::vector<Formula> parts;
  for (int k = 0; k < atoms; ++k) {
    Polynomial p = random_univariate(rng, 6);
    if (p.is_constant()) p = Polynomial::variable(1);
    parts.push_back(Formula::atom(p, rels[rng() % 6]));
  }
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

}  // namespace

TEST_CASE("oracle_1d regions") {
  Formula phi = Formula::conjunction({Formula::atom(P("x1^2"), Relation::GT),
                                      Formula::disjunction({Formula::atom(P("x1 - 2"), Relation::LT),
                                                            Formula::atom(P("x1 - 4"), Relation::GT)})});
  auto regions = oracle_1d(phi);
  REQUIRE(regions.size() == 7);  // points 0, 2, 4
  std::vector<bool> labels;
  for (const auto& r : regions) labels.push_back(r.label);
  CHECK(labels == std::vector<bool>{true, false, true, false, false, false, true});
  CHECK(compare(*regions[1].interval.lower, AlgebraicNumber(0)) == 0);
  CHECK(compare(*regions[3].interval.lower, AlgebraicNumber(2)) == 0);
  CHECK(compare(*regions[5].interval.lower, AlgebraicNumber(4)) == 0);

  auto one = oracle_1d(Formula::atom(P("x1^2 + 1"), Relation::GT));
  REQUIRE(one.size() == 1);
  CHECK(one[0].label);

  auto eq = oracle_1d(Formula::atom(P("x1"), Relation::EQ));
  REQUIRE(eq.size() == 3);
  CHECK_FALSE(eq[0].label);
  CHECK(eq[1].label);
  CHECK_FALSE(eq[2].label);

  CHECK_THROWS_AS(oracle_1d(Formula::atom(P("x2"), Relation::EQ)), DomainError);
}

TEST_CASE("oracle_quantified examples") {
  auto a = oracle_quantified(problem(Formula::atom(P("x1^2"), Relation::LE), {{Quantifier::Exists, 1}}, 1), {});
  CHECK(a.value);
  CHECK(a.certain);
  auto b = oracle_quantified(problem(Formula::atom(P("x1 - 1"), Relation::GT), {{Quantifier::Forall, 1}}, 1), {});
  CHECK_FALSE(b.value);
  CHECK(b.certain);
  auto c = oracle_quantified(problem(Formula::atom(P("x2^2 + 1 - x1"), Relation::GT),
                                     {{Quantifier::Exists, 1}, {Quantifier::Forall, 2}}, 2),
                             {});
  CHECK(c.value);
  CHECK(c.certain);
  // an existential without a grid witness is not certain
  auto d = oracle_quantified(problem(Formula::atom(P("x2^2 + 1 - x1"), Relation::LT),
                                     {{Quantifier::Forall, 1}, {Quantifier::Exists, 2}}, 2),
                             {});
  CHECK_FALSE(d.value);
  CHECK(d.certain);
  // free parameters are fixed exactly
  auto e = problem(Formula::atom(P("x1^2 + x2^2 - 1"), Relation::LT), {{Quantifier::Exists, 2}}, 2);
  CHECK(oracle_quantified(e, {}, {Rational(1, 2)}).value);
  CHECK_FALSE(oracle_quantified(e, {}, {Rational(1)}).value);
  CHECK(oracle_quantified(e, {}, {Rational(1)}).certain);
}

TEST_CASE("random cell points stay in the cell") {
  std::mt19937_64 rng(kOracleSeed);
  RealizedInterval r{AlgebraicNumber(0), AlgebraicNumber(Rational(1, 1000000)), false, false};
  for (int k = 0; k < 100; ++k) CHECK(r.contains(random_in(r, rng)));
  RealizedInterval ray{AlgebraicNumber(3), std::nullopt, true, false};
  for (int k = 0; k < 100; ++k) CHECK(ray.contains(random_in(ray, rng)));
}

TEST_CASE("univariate decompositions match the 1D oracle exactly") {
  std::mt19937_64 rng(kOracleSeed);
  for (int k = 0; k < 60; ++k) {
    Formula f = random_formula(rng, 1 + static_cast<int>(rng() % 5));
    auto regions = oracle_1d(f);
    for (SplitMode mode : {SplitMode::Classic, SplitMode::Improved}) {
      NuCadSolver solver(problem(f, {}, 1), {mode});
      auto t = solver.decompose();
      auto diff = first_difference_1d(t, regions);
      INFO(f.to_string());
      CHECK_FALSE(diff.has_value());
    }
  }
}

TEST_CASE("fault injection on a 1D tree") {
  Formula f = Formula::atom(P("x1^2 - 2"), Relation::LT);
  auto regions = oracle_1d(f);
  NuCadSolver solver(problem(f, {}, 1), {SplitMode::Classic});
  auto t = solver.decompose();
  CHECK_FALSE(first_difference_1d(t, regions));
  NuCadTree bad = t;
  NuCadTree* leaf = &bad;
  while (!leaf->is_leaf()) leaf = &leaf->children.back();
  leaf->label = !*leaf->label;
  CHECK(first_difference_1d(bad, regions));
}
