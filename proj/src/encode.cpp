#include "nucad/encode.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "nucad/errors.hpp"
#include "nucad/realroots.hpp"

namespace nucad {

// ---------------------------------------------------------------------------
// Merging

namespace {

void all_labels(const NuCadTree& t, bool& seen_true, bool& seen_false) {
  if (t.is_leaf()) {
    (*t.label ? seen_true : seen_false) = true;
    return;
  }
  for (const auto& c : t.children) all_labels(c, seen_true, seen_false);
}

const NuCadTree& first_leaf(const NuCadTree& t) { return t.is_leaf() ? t : first_leaf(t.children.front()); }

// a directly below b
bool adjacent(const SymbolicInterval& a, const SymbolicInterval& b) {
  return a.upper && b.lower && *a.upper == *b.lower && a.upper_closed != b.lower_closed;
}

SymbolicInterval join(const SymbolicInterval& a, const SymbolicInterval& b) {
  SymbolicInterval I;
  I.level = a.level;
  I.lower = a.lower;
  I.lower_closed = a.lower_closed;
  I.upper = b.upper;
  I.upper_closed = b.upper_closed;
  return I;
}

void merge_node(NuCadTree& t) {
  if (t.is_leaf()) return;
  for (auto& c : t.children) merge_node(c);
  bool seen_true = false, seen_false = false;
  all_labels(t, seen_true, seen_false);
  if (seen_true != seen_false) {
    SamplePoint s = first_leaf(t).sample;
    t.children.clear();
    t.label = seen_true;
    t.sample = std::move(s);
    return;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < t.children.size() && !changed; ++a) {
      for (std::size_t b = 0; b < t.children.size() && !changed; ++b) {
        if (a == b) continue;
        NuCadTree& lo = t.children[a];
        NuCadTree& hi = t.children[b];
        if (!lo.is_leaf() || !hi.is_leaf() || *lo.label != *hi.label || !adjacent(lo.interval, hi.interval)) continue;
        // the merged cell takes the place of the earlier sibling
        std::size_t keep = std::min(a, b), drop = std::max(a, b);
        SymbolicInterval I = join(lo.interval, hi.interval);
        t.children[keep].interval = I;
        if (keep == b) t.children[keep].sample = t.children[a].sample;
        t.children.erase(t.children.begin() + static_cast<std::ptrdiff_t>(drop));
        changed = true;
      }
    }
  }
}

}  // namespace

NuCadTree merge_tree(const NuCadTree& t) {
  NuCadTree out = t;
  merge_node(out);
  return out;
}

// ---------------------------------------------------------------------------
// Solution formulas

struct SolutionFormula::Node {
  Kind kind = Kind::True;
  Constraint constraint;
  RootAtom root;
  std::vector<SolutionFormula> children;
  std::size_t atoms = 0;
  bool has_roots = false;
};

SolutionFormula::SolutionFormula() : node_(std::make_shared<Node>()) {}

SolutionFormula SolutionFormula::top() { return SolutionFormula(); }

SolutionFormula SolutionFormula::bottom() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::False;
  return SolutionFormula(std::move(n));
}

SolutionFormula SolutionFormula::constraint(Constraint c) {
  if (c.lhs.is_constant()) return c.holds(sgn(c.lhs.constant_value())) ? top() : bottom();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constraint;
  n->constraint = std::move(c);
  n->atoms = 1;
  return SolutionFormula(std::move(n));
}

SolutionFormula SolutionFormula::root_atom(RootAtom a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Root;
  n->root = std::move(a);
  n->atoms = 1;
  n->has_roots = true;
  return SolutionFormula(std::move(n));
}

SolutionFormula SolutionFormula::negation(SolutionFormula f) {
  switch (f.kind()) {
    case Kind::True: return bottom();
    case Kind::False: return top();
    case Kind::Not: return f.children().front();
    case Kind::Constraint: return constraint(Constraint{f.as_constraint().lhs, negate(f.as_constraint().rel)});
    default: break;
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->atoms = f.atom_count();
  n->has_roots = f.has_root_atoms();
  n->children.push_back(std::move(f));
  return SolutionFormula(std::move(n));
}

namespace {

SolutionFormula junction(std::vector<SolutionFormula> fs, SolutionFormula::Kind kind) {
  using K = SolutionFormula::Kind;
  K unit = kind == K::And ? K::True : K::False;
  K absorbing = kind == K::And ? K::False : K::True;
  std::vector<SolutionFormula> flat;
  for (auto& f : fs) {
    if (f.kind() == absorbing) return f;
    if (f.kind() == unit) continue;
    std::vector<SolutionFormula> parts = f.kind() == kind ? f.children() : std::vector<SolutionFormula>{f};
    for (auto& p : parts)
      if (std::find(flat.begin(), flat.end(), p) == flat.end()) flat.push_back(std::move(p));
  }
  if (flat.empty()) return kind == K::And ? SolutionFormula::top() : SolutionFormula::bottom();
  if (flat.size() == 1) return flat.front();
  return kind == K::And ? SolutionFormula::conjunction(std::move(flat)) : SolutionFormula::disjunction(std::move(flat));
}

}  // namespace

SolutionFormula SolutionFormula::conjunction(std::vector<SolutionFormula> fs) {
  bool simple = fs.size() > 1;
  for (std::size_t k = 0; k < fs.size() && simple; ++k) {
    Kind c = fs[k].kind();
    simple = c != Kind::True && c != Kind::False && c != Kind::And &&
             std::find(fs.begin(), fs.begin() + static_cast<std::ptrdiff_t>(k), fs[k]) == fs.begin() + k;
  }
  if (!simple) return junction(std::move(fs), Kind::And);
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  for (const auto& f : fs) {
    n->atoms += f.atom_count();
    n->has_roots = n->has_roots || f.has_root_atoms();
  }
  n->children = std::move(fs);
  return SolutionFormula(std::move(n));
}

SolutionFormula SolutionFormula::disjunction(std::vector<SolutionFormula> fs) {
  bool simple = fs.size() > 1;
  for (std::size_t k = 0; k < fs.size() && simple; ++k) {
    Kind c = fs[k].kind();
    simple = c != Kind::True && c != Kind::False && c != Kind::Or &&
             std::find(fs.begin(), fs.begin() + static_cast<std::ptrdiff_t>(k), fs[k]) == fs.begin() + k;
  }
  if (!simple) return junction(std::move(fs), Kind::Or);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  for (const auto& f : fs) {
    n->atoms += f.atom_count();
    n->has_roots = n->has_roots || f.has_root_atoms();
  }
  n->children = std::move(fs);
  return SolutionFormula(std::move(n));
}

SolutionFormula::Kind SolutionFormula::kind() const { return node_->kind; }

const Constraint& SolutionFormula::as_constraint() const {
  if (kind() != Kind::Constraint) throw DomainError("solution formula is not a constraint");
  return node_->constraint;
}

const RootAtom& SolutionFormula::as_root() const {
  if (kind() != Kind::Root) throw DomainError("solution formula is not a root atom");
  return node_->root;
}

const std::vector<SolutionFormula>& SolutionFormula::children() const { return node_->children; }
std::size_t SolutionFormula::atom_count() const { return node_->atoms; }
bool SolutionFormula::has_root_atoms() const { return node_->has_roots; }

bool operator==(const SolutionFormula& a, const SolutionFormula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case SolutionFormula::Kind::True:
    case SolutionFormula::Kind::False: return true;
    case SolutionFormula::Kind::Constraint: return a.as_constraint() == b.as_constraint();
    case SolutionFormula::Kind::Root: return a.as_root() == b.as_root();
    default: return a.children() == b.children();
  }
}

bool SolutionFormula::holds(const SamplePoint& x) const {
  switch (kind()) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Constraint: return node_->constraint.holds(sign_at(node_->constraint.lhs, x));
    case Kind::Root: {
      const RootAtom& a = node_->root;
      if (x.size() < a.level) throw DomainError("solution formula: point too short");
      auto r = a.root.realize(x);
      if (!r) return false;
      return Constraint{Polynomial(), a.rel}.holds(compare(x[a.level - 1], *r));
    }
    case Kind::Not: return !children().front().holds(x);
    case Kind::And:
      return std::all_of(children().begin(), children().end(), [&](const auto& c) { return c.holds(x); });
    case Kind::Or:
      return std::any_of(children().begin(), children().end(), [&](const auto& c) { return c.holds(x); });
  }
  return false;
}

std::string SolutionFormula::to_string(const VarOrder* vars) const {
  auto wrap = [&](const SolutionFormula& c) {
    std::string s = c.to_string(vars);
    return c.kind() == Kind::And || c.kind() == Kind::Or ? "(" + s + ")" : s;
  };
  switch (kind()) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::Constraint: return node_->constraint.to_string(vars);
    case Kind::Root: {
      const RootAtom& a = node_->root;
      std::string name = vars ? vars->name(a.level) : "x" + std::to_string(a.level);
      return name + " " + nucad::to_string(a.rel) + " " + a.root.to_string(vars);
    }
    case Kind::Not: return "not (" + children().front().to_string(vars) + ")";
    case Kind::And:
    case Kind::Or: {
      std::string out;
      for (std::size_t k = 0; k < children().size(); ++k) {
        if (k > 0) out += kind() == Kind::And ? " and " : " or ";
        out += wrap(children()[k]);
      }
      return out;
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// SMT-LIB printing

std::string rational_smtlib(const Rational& q) {
  auto unsigned_text = [](const Rational& a) {
    if (a.get_den() == 1) return a.get_num().get_str();
    return "(/ " + a.get_num().get_str() + " " + a.get_den().get_str() + ")";
  };
  if (sgn(q) < 0) return "(- " + unsigned_text(-q) + ")";
  return unsigned_text(q);
}

std::string polynomial_smtlib(const Polynomial& p, const VarOrder& vars) {
  if (p.is_zero()) return "0";
  std::vector<std::string> terms;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    std::vector<std::string> factors;
    bool constant = std::all_of(e.begin(), e.end(), [](auto k) { return k == 0; });
    bool unit = !constant && (c == 1 || c == -1);
    if (!unit) factors.push_back(rational_smtlib(c));
    for (std::size_t k = e.size(); k-- > 0;)
      for (std::uint32_t d = 0; d < e[k]; ++d) factors.push_back(vars.name(k + 1));
    std::string t;
    if (factors.size() == 1) {
      t = factors.front();
    } else {
      t = "(*";
      for (const auto& f : factors) t += " " + f;
      t += ")";
    }
    terms.push_back(unit && c == -1 ? "(- " + t + ")" : t);
  }
  if (terms.size() == 1) return terms.front();
  std::string out = "(+";
  for (const auto& t : terms) out += " " + t;
  return out + ")";
}

std::string relation_smtlib(Relation rel, const std::string& lhs, const std::string& rhs) {
  if (rel == Relation::NE) return "(not (= " + lhs + " " + rhs + "))";
  return "(" + nucad::to_string(rel) + " " + lhs + " " + rhs + ")";
}

namespace {

void print_smtlib(const SolutionFormula& f, VarOrder& vars, bool pure, int& fresh, std::string& out) {
  using K = SolutionFormula::Kind;
  switch (f.kind()) {
    case K::True: out += "true"; return;
    case K::False: out += "false"; return;
    case K::Constraint:
      out += relation_smtlib(f.as_constraint().rel, polynomial_smtlib(f.as_constraint().lhs, vars), "0");
      return;
    case K::Root: {
      const RootAtom& a = f.as_root();
      std::string x = vars.name(a.level);
      if (!pure) {
        out += relation_smtlib(a.rel, x,
                               "(root " + x + " " + polynomial_smtlib(a.root.poly, vars) + " " +
                                   std::to_string(a.root.index) + ")");
        return;
      }
      std::string y = "y!" + std::to_string(++fresh);
      VarOrder extended = vars;
      while (extended.size() < a.level) extended.add("x" + std::to_string(extended.size() + 1));
      std::size_t ylevel = extended.add(y);
      std::vector<std::size_t> rename;
      for (std::size_t k = 1; k <= a.level; ++k) rename.push_back(k == a.level ? ylevel : k);
      Polynomial py = rename_variables(a.root.poly, rename);
      out += "(exists ((" + y + " Real)) (and (= " + polynomial_smtlib(py, extended) + " 0) " +
             relation_smtlib(a.rel, x, y) + "))";
      return;
    }
    case K::Not:
      out += "(not ";
      print_smtlib(f.children().front(), vars, pure, fresh, out);
      out += ")";
      return;
    case K::And:
    case K::Or:
      out += f.kind() == K::And ? "(and" : "(or";
      for (const auto& c : f.children()) {
        out += " ";
        print_smtlib(c, vars, pure, fresh, out);
      }
      out += ")";
      return;
  }
}

}  // namespace

std::string SolutionFormula::to_smtlib(const VarOrder& vars, bool pure) const {
  VarOrder v = vars;
  int fresh = 0;
  std::string out;
  print_smtlib(*this, v, pure, fresh, out);
  return out;
}

// ---------------------------------------------------------------------------
// Encoding

namespace {

// A constraint c with (x rel root) <=> c, when the root has a polynomial description.
std::optional<Constraint> as_constraint(const IndexedRoot& r, Relation rel) {
  std::size_t j = r.level;
  if (r.poly.degree(j) == 1 && r.index == 1) {
    Polynomial a = r.poly.coefficient(j, 1);
    if (a.is_constant()) {
      Polynomial p = sgn(a.constant_value()) > 0 ? r.poly : -r.poly;
      return Constraint{p, rel};
    }
  }
  if (j == 1 && r.poly.level() == 1) {
    auto v = r.realize({});
    if (!v) return std::nullopt;
    Rational q;
    if (v->is_rational()) {
      q = v->rational();
    } else {
      // a rational root has a small denominator; test the simplest candidate
      v->refine_below(Rational(1, 1000000));
      q = pick_rational(AlgebraicNumber(v->lower()), AlgebraicNumber(v->upper()));
      if (sgn(r.poly.evaluate(std::vector<Rational>{q})) != 0) return std::nullopt;
    }
    Polynomial lin = Polynomial::variable(1) * Rational(q.get_den()) - Polynomial::constant(Rational(q.get_num()));
    return Constraint{lin, rel};
  }
  return std::nullopt;
}

SolutionFormula bound_atom(const IndexedRoot& r, Relation rel) {
  if (auto c = as_constraint(r, rel)) return SolutionFormula::constraint(std::move(*c));
  return SolutionFormula::root_atom(RootAtom{r.level, rel, r});
}

struct Encoded {
  SolutionFormula truth, falsity;
};

SolutionFormula smaller(SolutionFormula direct, SolutionFormula negated) {
  return negated.atom_count() < direct.atom_count() ? negated : direct;
}

Encoded encode(const NuCadTree& t) {
  if (t.is_leaf())
    return *t.label ? Encoded{SolutionFormula::top(), SolutionFormula::bottom()}
                    : Encoded{SolutionFormula::bottom(), SolutionFormula::top()};
  std::vector<SolutionFormula> pos, neg;
  for (const auto& c : t.children) {
    Encoded e = encode(c);
    std::vector<SolutionFormula> atoms = interval_atoms(c.interval);
    if (e.truth.kind() != SolutionFormula::Kind::False) {
      auto conj = atoms;
      conj.push_back(e.truth);
      pos.push_back(SolutionFormula::conjunction(std::move(conj)));
    }
    if (e.falsity.kind() != SolutionFormula::Kind::False) {
      auto conj = atoms;
      conj.push_back(e.falsity);
      neg.push_back(SolutionFormula::conjunction(std::move(conj)));
    }
  }
  SolutionFormula direct_t = SolutionFormula::disjunction(std::move(pos));
  SolutionFormula direct_f = SolutionFormula::disjunction(std::move(neg));
  return {smaller(direct_t, SolutionFormula::negation(direct_f)), smaller(direct_f, SolutionFormula::negation(direct_t))};
}

}  // namespace

std::vector<SolutionFormula> interval_atoms(const SymbolicInterval& I) {
  std::vector<SolutionFormula> out;
  if (I.is_section()) {
    out.push_back(bound_atom(*I.lower, Relation::EQ));
    return out;
  }
  if (I.lower) out.push_back(bound_atom(*I.lower, I.lower_closed ? Relation::GE : Relation::GT));
  if (I.upper) out.push_back(bound_atom(*I.upper, I.upper_closed ? Relation::LE : Relation::LT));
  return out;
}

SolutionFormula emit_formula(const NuCadTree& t) { return encode(t).truth; }

// ---------------------------------------------------------------------------
// Statistics

namespace {

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

}  // namespace

std::string StatsReport::csv_header(bool with_times) {
  std::string h = "atoms,cells,leaves,symbolic_intervals,sections";
  if (with_times) h += ",real_root_seconds,non_algebraic_seconds,total_seconds";
  return h + ",aborted";
}

std::string StatsReport::csv_row(bool with_times) const {
  std::ostringstream os;
  os << atoms << ',' << cells << ',' << leaves << ',' << symbolic_intervals << ',' << sections;
  if (with_times)
    os << ',' << seconds(real_root_seconds) << ',' << seconds(non_algebraic_seconds) << ',' << seconds(total_seconds);
  os << ',' << (aborted ? "true" : "false");
  return os.str();
}

std::string StatsReport::to_text(bool with_times) const {
  std::ostringstream os;
  os << "atoms               " << atoms << '\n'
     << "cells               " << cells << '\n'
     << "leaves              " << leaves << '\n'
     << "symbolic intervals  " << symbolic_intervals << '\n'
     << "sections            " << sections << '\n';
  if (with_times)
    os << "real-root time      " << seconds(real_root_seconds) << " s\n"
       << "non-algebraic time  " << seconds(non_algebraic_seconds) << " s\n"
       << "total time          " << seconds(total_seconds) << " s\n";
  os << "aborted             " << (aborted ? "yes" : "no") << '\n';
  return os.str();
}

StatsReport collect_stats(const SolveStats& stats, const NuCadTree* tree, const SolutionFormula* formula) {
  StatsReport r;
  r.atoms = formula ? formula->atom_count() : stats.atoms;
  r.cells = stats.cells;
  r.leaves = tree ? tree->leaf_count() : 0;
  r.symbolic_intervals = stats.symbolic_intervals;
  r.sections = stats.sections;
  r.real_root_seconds = stats.real_root_seconds;
  r.non_algebraic_seconds = stats.non_algebraic_seconds;
  r.total_seconds = stats.total_seconds;
  r.aborted = stats.aborted;
  return r;
}

}  // namespace nucad
