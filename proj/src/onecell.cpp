#include "nucad/onecell.hpp"

#include <algorithm>
#include <deque>

#include "nucad/errors.hpp"
#include "nucad/realroots.hpp"

namespace nucad {

namespace {

SamplePoint prefix(const SamplePoint& s, std::size_t n) {
  return SamplePoint(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(std::min(n, s.size())));
}

std::string var_name(std::size_t level, const VarOrder* vars) {
  return vars ? vars->name(level) : "x" + std::to_string(level);
}

}  // namespace

std::optional<AlgebraicNumber> IndexedRoot::realize(const SamplePoint& s) const {
  if (s.size() + 1 < level) throw DomainError("indexed root realized over a short sample");
  RootsAtSample r = roots_at_sample(poly, prefix(s, level - 1));
  if (r.nullified || index == 0 || index > r.roots.size()) return std::nullopt;
  return r.roots[index - 1];
}

std::string IndexedRoot::to_string(const VarOrder* vars) const {
  return "root(" + var_name(level, vars) + ", " + poly.to_string(vars) + ", " + std::to_string(index) + ")";
}

bool RealizedInterval::empty() const {
  if (!lower || !upper) return false;
  int c = compare(*lower, *upper);
  if (c != 0) return c > 0;
  return !(lower_closed && upper_closed);
}

bool RealizedInterval::is_point() const {
  return lower && upper && lower_closed && upper_closed && compare(*lower, *upper) == 0;
}

bool RealizedInterval::contains(const AlgebraicNumber& x) const {
  if (lower) {
    int c = compare(x, *lower);
    if (c < 0 || (c == 0 && !lower_closed)) return false;
  }
  if (upper) {
    int c = compare(x, *upper);
    if (c > 0 || (c == 0 && !upper_closed)) return false;
  }
  return true;
}

AlgebraicNumber RealizedInterval::sample() const {
  if (is_point()) return *lower;
  return AlgebraicNumber(pick_rational(lower, upper));
}

SymbolicInterval SymbolicInterval::full(std::size_t level) {
  SymbolicInterval I;
  I.level = level;
  return I;
}

SymbolicInterval SymbolicInterval::section(IndexedRoot r) {
  SymbolicInterval I;
  I.level = r.level;
  I.lower = r;
  I.upper = std::move(r);
  I.lower_closed = I.upper_closed = true;
  return I;
}

std::optional<RealizedInterval> SymbolicInterval::realize(const SamplePoint& s) const {
  RealizedInterval r;
  r.lower_closed = lower_closed;
  r.upper_closed = upper_closed;
  if (lower) {
    r.lower = lower->realize(s);
    if (!r.lower) return std::nullopt;
  }
  if (is_section()) {
    r.upper = r.lower;
    return r;
  }
  if (upper) {
    r.upper = upper->realize(s);
    if (!r.upper) return std::nullopt;
  }
  return r;
}

std::string SymbolicInterval::to_string(const VarOrder* vars) const {
  if (is_section()) return "[" + lower->to_string(vars) + ", " + upper->to_string(vars) + "]";
  std::string lo = lower ? lower->to_string(vars) : "-oo";
  std::string hi = upper ? upper->to_string(vars) : "oo";
  return std::string(lower_closed ? "[" : "(") + lo + ", " + hi + (upper_closed ? "]" : ")");
}

// ---------------------------------------------------------------------------

ProjectionSet::ProjectionSet(const std::vector<Polynomial>& ps) {
  for (const auto& p : ps) insert(p);
}

void ProjectionSet::insert(const Polynomial& p, bool semi_only) {
  if (p.is_constant()) return;
  for (auto& f : projection_factors(p)) insert_factor(std::move(f), semi_only);
}

void ProjectionSet::insert_factor(Polynomial f, bool semi_only) {
  std::deque<std::pair<Polynomial, bool>> work;
  work.emplace_back(std::move(f), semi_only);
  while (!work.empty()) {
    auto [g, flag] = std::move(work.front());
    work.pop_front();
    if (g.is_constant()) continue;
    g = canonical(g);
    auto it = members_.find(g);
    if (it != members_.end()) {
      it->second = it->second && flag;
      continue;
    }
    std::size_t lvl = g.level();
    bool split = false;
    for (auto m = members_.begin(); m != members_.end(); ++m) {
      if (m->first.level() != lvl) continue;
      Polynomial c = gcd(g, m->first);
      if (c.degree(lvl) == 0) continue;
      Polynomial h = m->first;
      bool hflag = m->second;
      members_.erase(m);
      work.emplace_back(c, flag && hflag);
      work.emplace_back(divide_exact(h, c), hflag);
      work.emplace_back(divide_exact(g, c), flag);
      split = true;
      break;
    }
    if (!split) members_.emplace(std::move(g), flag);
  }
}

void ProjectionSet::merge(const ProjectionSet& other) {
  for (const auto& [p, flag] : other.members_) insert_factor(p, flag);
}

std::vector<Polynomial> ProjectionSet::at_level(std::size_t level) const {
  std::vector<Polynomial> out;
  for (const auto& [p, flag] : members_)
    if (p.level() == level) out.push_back(p);
  return out;
}

bool ProjectionSet::semi_only(const Polynomial& p) const {
  auto it = members_.find(p);
  return it != members_.end() && it->second;
}

std::size_t ProjectionSet::max_level() const {
  std::size_t m = 0;
  for (const auto& [p, flag] : members_) m = std::max(m, p.level());
  return m;
}

ProjectionSet ProjectionSet::below(std::size_t level) const {
  ProjectionSet out;
  for (const auto& [p, flag] : members_)
    if (p.level() <= level) out.members_.emplace(p, flag);
  return out;
}

std::string ProjectionSet::to_string(const VarOrder* vars) const {
  std::string out = "{";
  bool first = true;
  for (const auto& [p, flag] : members_) {
    if (!first) out += ", ";
    first = false;
    out += p.to_string(vars);
    if (flag) out += " (semi)";
  }
  return out + "}";
}

// ---------------------------------------------------------------------------

bool nullified_at(const Polynomial& p, const SamplePoint& s) {
  std::size_t lvl = p.level();
  if (lvl == 0) return p.is_zero();
  SamplePoint base = prefix(s, lvl - 1);
  for (const auto& c : p.coefficients(lvl))
    if (!c.is_zero() && sign_at(c, base) != 0) return false;
  return true;
}

namespace {

struct RootEntry {
  AlgebraicNumber value;
  Polynomial poly;
  std::uint32_t index;
  bool semi_only;
};

// Bound polynomial among several with the same root: least degree, then
// least level, then canonical order.
bool better_bound(const RootEntry& a, const RootEntry& b, std::size_t level) {
  auto da = a.poly.degree(level), db = b.poly.degree(level);
  if (da != db) return da < db;
  if (a.poly.level() != b.poly.level()) return a.poly.level() < b.poly.level();
  return a.poly < b.poly;
}

}  // namespace

SymbolicInterval choose_interval(const ProjectionSet& P, const SamplePoint& s, bool half_closed) {
  std::size_t i = s.size();
  if (i == 0) throw DomainError("choose_interval needs a non-empty sample");
  SamplePoint base = prefix(s, i - 1);
  std::vector<RootEntry> roots;
  for (const auto& p : P.at_level(i)) {
    RootsAtSample r = roots_at_sample(p, base);
    if (r.nullified) continue;
    for (std::size_t k = 0; k < r.roots.size(); ++k)
      roots.push_back({r.roots[k], p, static_cast<std::uint32_t>(k + 1), P.semi_only(p)});
  }
  std::stable_sort(roots.begin(), roots.end(),
                   [](const RootEntry& a, const RootEntry& b) { return compare(a.value, b.value) < 0; });

  // groups of equal values
  struct Group {
    std::size_t first, last;  // [first, last)
    std::size_t best;
    bool all_semi;
  };
  std::vector<Group> groups;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    if (!groups.empty() && compare(roots[groups.back().first].value, roots[k].value) == 0) {
      Group& g = groups.back();
      g.last = k + 1;
      if (better_bound(roots[k], roots[g.best], i)) g.best = k;
      g.all_semi = g.all_semi && roots[k].semi_only;
    } else {
      groups.push_back({k, k + 1, k, roots[k].semi_only});
    }
  }

  auto expr = [&](const Group& g) {
    const RootEntry& e = roots[g.best];
    return IndexedRoot{i, e.poly, e.index};
  };

  SymbolicInterval I = SymbolicInterval::full(i);
  const AlgebraicNumber& x = s[i - 1];
  // first group not below x
  std::size_t k = 0;
  int c = 1;
  while (k < groups.size()) {
    c = compare(x, roots[groups[k].first].value);
    if (c <= 0) break;
    ++k;
  }
  if (k < groups.size() && c == 0) return SymbolicInterval::section(expr(groups[k]));
  if (k > 0) {
    I.lower = expr(groups[k - 1]);
    I.lower_closed = half_closed && groups[k - 1].all_semi;
  }
  if (k < groups.size()) {
    I.upper = expr(groups[k]);
    I.upper_closed = half_closed && groups[k].all_semi;
  }
  return I;
}

namespace {

void add_resultant(ProjectionSet& out, const Polynomial& b, const Polynomial& p, std::size_t level) {
  Polynomial r = resultant(b, p, level);
  if (r.is_zero()) {
    // common factor: use the cofactor of p
    Polynomial g = gcd(b, p);
    Polynomial q = divide_exact(p, g);
    if (q.degree(level) == 0) return;
    r = resultant(b, q, level);
  }
  out.insert(r);
}

}  // namespace

ProjectionSet compute_cell_projection(const ProjectionSet& P, const SamplePoint& s, const SymbolicInterval& I) {
  std::size_t i = s.size();
  SamplePoint base = prefix(s, i - 1);
  ProjectionSet out = P.below(i - 1);
  std::vector<Polynomial> bounds;
  if (I.lower) bounds.push_back(I.lower->poly);
  if (I.upper && !(I.lower && I.upper->poly == I.lower->poly)) bounds.push_back(I.upper->poly);

  for (const auto& p : P.at_level(i)) {
    bool is_bound = std::find(bounds.begin(), bounds.end(), p) != bounds.end();
    auto coeffs = p.coefficients(i);
    if (nullified_at(p, s)) {
      if (is_bound) throw NullificationFailure("bound polynomial " + p.to_string() + " vanishes identically");
      for (const auto& c : coeffs) out.insert(c);
      continue;
    }
    if (p.degree(i) >= 2) out.insert(discriminant(p, i));
    for (std::size_t k = coeffs.size(); k-- > 0;) {
      if (coeffs[k].is_zero()) continue;
      out.insert(coeffs[k]);
      if (coeffs[k].is_constant() || sign_at(coeffs[k], base) != 0) break;
    }
    for (const auto& b : bounds)
      if (b != p) add_resultant(out, b, p, i);
  }
  return out;
}

CellResult construct_cell(ProjectionSet P, const SamplePoint& s, std::size_t top, std::size_t bottom,
                          bool half_closed) {
  if (top > s.size()) throw DomainError("construct_cell: sample too short");
  CellResult result;
  result.intervals.resize(top >= bottom ? top - bottom + 1 : 0);
  for (std::size_t j = top; j >= bottom && j > 0; --j) {
    SamplePoint sj = prefix(s, j);
    SymbolicInterval I = choose_interval(P, sj, half_closed);
    P = compute_cell_projection(P, sj, I);
    result.intervals[j - bottom] = std::move(I);
  }
  result.residual = std::move(P);
  return result;
}

}  // namespace nucad
