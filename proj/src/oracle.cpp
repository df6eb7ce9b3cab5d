#include "nucad/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "nucad/errors.hpp"
#include "nucad/realroots.hpp"

namespace nucad {

std::vector<Region1D> oracle_1d(const Formula& f) {
  if (!f.quantifier_free()) throw DomainError("oracle_1d: formula has quantifiers");
  if (f.level() > 1) throw DomainError("oracle_1d: formula is not univariate");
  std::vector<AlgebraicNumber> points;
  for (const auto& p : polynomials(f)) {
    if (p.is_constant()) continue;
    for (auto& r : isolate_roots(p)) points.push_back(std::move(r));
  }
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return compare(a, b) < 0; });
  points.erase(std::unique(points.begin(), points.end(), [](const auto& a, const auto& b) { return compare(a, b) == 0; }),
               points.end());

  std::vector<Region1D> out;
  auto add = [&](RealizedInterval r) {
    Region1D region{std::move(r), false};
    region.label = holds(f, SamplePoint{region.interval.sample()});
    out.push_back(std::move(region));
  };
  std::optional<AlgebraicNumber> last;
  for (const auto& x : points) {
    add(RealizedInterval{last, x, false, false});
    add(RealizedInterval{x, x, true, true});
    last = x;
  }
  add(RealizedInterval{last, std::nullopt, false, false});
  return out;
}

bool label_1d(const std::vector<Region1D>& regions, const AlgebraicNumber& x) {
  for (const auto& r : regions)
    if (r.interval.contains(x)) return r.label;
  throw DomainError("label_1d: regions do not cover the point");
}

namespace {

// Truth of Q_k x_k ... Q_n x_n . matrix[point] with point = values of x_1..x_{k-1}.
OracleAnswer quantified_answer(const PrenexFormula& f, const std::vector<Rational>& grid_values,
                               std::vector<Rational>& point) {
  std::size_t n = f.variable_count();
  std::size_t k = point.size() + 1;
  if (k == n) {
    // innermost variable: exact univariate decision
    std::vector<std::size_t> rename(n, 0);
    rename[n - 1] = 1;
    Formula g = substitute(f.matrix, point);
    g = map_constraints(g, [&](const Constraint& c) { return Constraint{rename_variables(c.lhs, rename), c.rel}; });
    auto regions = oracle_1d(g);
    bool exists = f.prefix.back() == Quantifier::Exists;
    bool value = exists ? std::any_of(regions.begin(), regions.end(), [](const Region1D& r) { return r.label; })
                        : std::all_of(regions.begin(), regions.end(), [](const Region1D& r) { return r.label; });
    return {value, true};
  }
  Quantifier q = f.prefix[k - 1 - f.free_count];
  bool witness_value = q == Quantifier::Exists;
  OracleAnswer out{!witness_value, false};
  for (const auto& v : grid_values) {
    point.push_back(v);
    OracleAnswer sub = quantified_answer(f, grid_values, point);
    point.pop_back();
    if (sub.value == witness_value) {
      out.value = witness_value;
      if (sub.certain) {
        out.certain = true;
        return out;
      }
    }
  }
  return out;
}

}  // namespace

OracleAnswer oracle_quantified(const PrenexFormula& f, const GridSpec& grid, const std::vector<Rational>& params) {
  if (params.size() != f.free_count) throw DomainError("oracle_quantified: parameter count mismatch");
  if (f.prefix.size() > 3) throw DomainError("oracle_quantified: more than three bound variables");
  if (sgn(grid.step) <= 0 || grid.high < grid.low) throw DomainError("oracle_quantified: bad grid");
  std::vector<Rational> point = params;
  if (f.prefix.empty()) return {holds(f.matrix, point), true};
  std::vector<Rational> values;
  for (Rational v = grid.low; v <= grid.high; v += grid.step) values.push_back(v);
  return quantified_answer(f, values, point);
}

AlgebraicNumber random_in(const RealizedInterval& r, std::mt19937_64& rng, double spread) {
  if (r.is_point()) return *r.lower;
  if (r.empty()) throw DomainError("random_in: empty interval");
  double lo, hi;
  if (r.lower && r.upper) {
    lo = r.lower->approx();
    hi = r.upper->approx();
  } else if (r.lower) {
    lo = r.lower->approx();
    hi = lo + spread;
  } else if (r.upper) {
    hi = r.upper->approx();
    lo = hi - spread;
  } else {
    lo = -spread;
    hi = spread;
  }
  std::uniform_real_distribution<double> dist(lo, hi);
  for (int attempt = 0; attempt < 16; ++attempt) {
    double x = dist(rng);
    Rational q = make_rational(Integer(static_cast<long>(std::llround(std::ldexp(x, 20)))), Integer(1) << 20);
    AlgebraicNumber a(q);
    if (r.contains(a)) return a;
  }
  return r.sample();
}

bool random_point_in(const std::vector<SymbolicInterval>& cell, std::mt19937_64& rng, SamplePoint& out) {
  out.clear();
  for (const auto& I : cell) {
    if (I.level != out.size() + 1) throw DomainError("random_point_in: cell levels out of order");
    auto R = I.realize(out);
    if (!R || R->empty()) return false;
    out.push_back(random_in(*R, rng));
  }
  return true;
}

namespace {

void collect_leaves(const NuCadTree& node, std::vector<SymbolicInterval>& path, std::vector<LeafCell>& out) {
  for (const auto& c : node.children) {
    std::vector<SymbolicInterval> saved = path;
    // a nested NuCAD refines the levels it restarts at
    path.resize(c.interval.level - 1);
    path.push_back(c.interval);
    if (c.is_leaf())
      out.push_back(LeafCell{path, *c.label, &c});
    else
      collect_leaves(c, path, out);
    path = std::move(saved);
  }
}

}  // namespace

std::vector<LeafCell> leaf_cells(const NuCadTree& t) {
  std::vector<LeafCell> out;
  if (t.is_leaf()) {
    out.push_back(LeafCell{{}, *t.label, &t});
    return out;
  }
  std::vector<SymbolicInterval> path;
  collect_leaves(t, path, out);
  return out;
}

std::optional<AlgebraicNumber> first_difference_1d(const NuCadTree& t, const std::vector<Region1D>& regions) {
  std::vector<AlgebraicNumber> ends;
  auto add = [&](const RealizedInterval& r) {
    if (r.lower) ends.push_back(*r.lower);
    if (r.upper) ends.push_back(*r.upper);
  };
  for (const auto& r : regions) add(r.interval);
  for (const auto& leaf : leaf_cells(t)) {
    if (leaf.cell.size() != 1) throw DomainError("first_difference_1d: tree is not one-dimensional");
    auto R = leaf.cell.front().realize({});
    if (!R) throw DomainError("first_difference_1d: undefined cell bound");
    add(*R);
  }
  auto less = [](const AlgebraicNumber& a, const AlgebraicNumber& b) { return compare(a, b) < 0; };
  std::sort(ends.begin(), ends.end(), less);
  ends.erase(std::unique(ends.begin(), ends.end(), [](const auto& a, const auto& b) { return compare(a, b) == 0; }),
             ends.end());

  std::vector<AlgebraicNumber> probes;
  std::optional<AlgebraicNumber> last;
  for (const auto& x : ends) {
    probes.emplace_back(pick_rational(last, x));
    probes.push_back(x);
    last = x;
  }
  probes.emplace_back(pick_rational(last, std::nullopt));
  for (const auto& x : probes) {
    SamplePoint pt{x};
    auto leaves = locate_all(t, pt);
    if (leaves.size() != 1 || *leaves.front()->label != label_1d(regions, x)) return x;
  }
  return std::nullopt;
}

std::string DecompositionReport::to_string() const {
  std::ostringstream os;
  os << (ok() ? "ok" : "FAILED") << ": " << points << " coverage points, " << leaves << " leaves, " << leaf_points
     << " leaf points; uncovered " << uncovered << ", overlapping " << overlapping << ", wrong label " << wrong_label;
  for (const auto& c : counterexamples) os << "\n  " << c;
  return os.str();
}

std::string DecompositionReport::to_json() const {
  nlohmann::json j = {{"ok", ok()},
                      {"points", points},
                      {"leaves", leaves},
                      {"leaf_points", leaf_points},
                      {"uncovered", uncovered},
                      {"overlapping", overlapping},
                      {"wrong_label", wrong_label},
                      {"counterexamples", counterexamples}};
  return j.dump(2);
}

DecompositionReport check_decomposition(const NuCadTree& t,
                                        const std::function<std::optional<bool>(const SamplePoint&)>& truth,
                                        const DecompositionCheck& config) {
  DecompositionReport rep;
  std::mt19937_64 rng(config.seed);
  auto note = [&](const std::string& what, const SamplePoint& x) {
    if (rep.counterexamples.size() < 10) rep.counterexamples.push_back(what + " at " + nucad::to_string(x));
  };
  auto check_label = [&](bool label, const SamplePoint& x) {
    auto expected = truth(x);
    if (expected && *expected != label) {
      ++rep.wrong_label;
      note(std::string("label ") + (label ? "TRUE" : "FALSE") + " differs from the reference", x);
    }
  };

  double box = to_double(config.box);
  std::uniform_real_distribution<double> coord(-box, box);
  for (std::size_t k = 0; k < config.points; ++k) {
    SamplePoint x;
    for (std::size_t d = 0; d < config.dimension; ++d)
      x.emplace_back(make_rational(Integer(static_cast<long>(std::llround(std::ldexp(coord(rng), 20)))),
                                   Integer(1) << 20));
    ++rep.points;
    auto leaves = locate_all(t, x);
    if (leaves.empty()) {
      ++rep.uncovered;
      note("no cell", x);
      continue;
    }
    if (leaves.size() > 1) {
      ++rep.overlapping;
      note(std::to_string(leaves.size()) + " cells", x);
    }
    check_label(*leaves.front()->label, x);
  }

  for (const auto& leaf : leaf_cells(t)) {
    ++rep.leaves;
    for (std::size_t k = 0; k < config.per_leaf; ++k) {
      SamplePoint x;
      if (!random_point_in(leaf.cell, rng, x)) {
        ++rep.uncovered;
        note("leaf cell undefined", leaf.leaf->sample);
        break;
      }
      if (x.size() < config.dimension) continue;
      ++rep.leaf_points;
      check_label(leaf.label, x);
      // sections and sectors are the only cells; one sample suffices for a point cell
      if (std::all_of(leaf.cell.begin(), leaf.cell.end(), [](const SymbolicInterval& I) { return I.is_section(); }))
        break;
    }
  }
  return rep;
}

}  // namespace nucad
