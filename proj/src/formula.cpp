#include "nucad/formula.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "nucad/errors.hpp"
#include "nucad/realroots.hpp"

namespace nucad {

SignMask mask_of_sign(int sign) { return sign < 0 ? kNegative : sign == 0 ? kZero : kPositive; }

Relation negate(Relation r) {
  switch (r) {
    case Relation::EQ: return Relation::NE;
    case Relation::NE: return Relation::EQ;
    case Relation::LT: return Relation::GE;
    case Relation::LE: return Relation::GT;
    case Relation::GT: return Relation::LE;
    case Relation::GE: return Relation::LT;
  }
  return r;
}

Relation mirror(Relation r) {
  switch (r) {
    case Relation::LT: return Relation::GT;
    case Relation::LE: return Relation::GE;
    case Relation::GT: return Relation::LT;
    case Relation::GE: return Relation::LE;
    default: return r;
  }
}

SignMask satisfying_signs(Relation r) {
  switch (r) {
    case Relation::EQ: return kZero;
    case Relation::NE: return kNegative | kPositive;
    case Relation::LT: return kNegative;
    case Relation::LE: return kNegative | kZero;
    case Relation::GT: return kPositive;
    case Relation::GE: return kZero | kPositive;
  }
  return 0;
}

std::string to_string(Relation r) {
  switch (r) {
    case Relation::EQ: return "=";
    case Relation::NE: return "!=";
    case Relation::LT: return "<";
    case Relation::LE: return "<=";
    case Relation::GT: return ">";
    case Relation::GE: return ">=";
  }
  return "?";
}

std::string to_string(TruthValue t) {
  switch (t) {
    case TruthValue::True: return "TRUE";
    case TruthValue::False: return "FALSE";
    default: return "UNDETERMINED";
  }
}

Constraint Constraint::normalized() const {
  if (lhs.is_constant()) return {Polynomial::constant(sgn(lhs.constant_value())), rel};
  Rational c = canonical_factor(lhs);
  return {canonical(lhs), sgn(c) < 0 ? mirror(rel) : rel};
}

std::string Constraint::to_string(const VarOrder* vars) const {
  return lhs.to_string(vars) + " " + nucad::to_string(rel) + " 0";
}

// ---------------------------------------------------------------------------

struct Formula::Node {
  Kind kind = Kind::True;
  Constraint constraint;
  std::vector<Formula> children;
  std::size_t bound = 0;
  std::size_t level = 0;
  std::size_t atoms = 0;
  bool quantifier_free = true;
};

namespace {

const Formula& true_formula() {
  static const Formula t = Formula::top();
  return t;
}

}  // namespace

Formula::Formula() : node_(true_formula().node_) {}

Formula Formula::top() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::True;
  return Formula(std::move(n));
}

Formula Formula::bottom() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::False;
  return Formula(std::move(n));
}

Formula Formula::atom(Constraint c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->level = c.lhs.level();
  n->atoms = 1;
  n->constraint = std::move(c);
  return Formula(std::move(n));
}

Formula Formula::atom(Polynomial lhs, Relation rel) { return atom(Constraint{std::move(lhs), rel}); }

namespace {

template <class Node>
void absorb(Node& n, const std::vector<Formula>& children) {
  for (const auto& c : children) {
    n.level = std::max(n.level, c.level());
    n.atoms += c.atom_count();
    n.quantifier_free = n.quantifier_free && c.quantifier_free();
  }
}

}  // namespace

Formula Formula::negation(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->children.push_back(std::move(f));
  absorb(*n, n->children);
  return Formula(std::move(n));
}

Formula Formula::conjunction(std::vector<Formula> fs) {
  if (fs.empty()) return top();
  if (fs.size() == 1) return fs.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->children = std::move(fs);
  absorb(*n, n->children);
  return Formula(std::move(n));
}

Formula Formula::disjunction(std::vector<Formula> fs) {
  if (fs.empty()) return bottom();
  if (fs.size() == 1) return fs.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->children = std::move(fs);
  absorb(*n, n->children);
  return Formula(std::move(n));
}

Formula Formula::quantified(Quantifier q, std::size_t level, Formula body) {
  if (level == 0) throw DomainError("quantified variable must have a positive level");
  auto n = std::make_shared<Node>();
  n->kind = q == Quantifier::Exists ? Kind::Exists : Kind::Forall;
  n->bound = level;
  n->children.push_back(std::move(body));
  absorb(*n, n->children);
  n->level = std::max(n->level, level);
  n->quantifier_free = false;
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return node_->kind; }

const Constraint& Formula::constraint() const {
  if (node_->kind != Kind::Atom) throw DomainError("formula is not an atom");
  return node_->constraint;
}

const std::vector<Formula>& Formula::children() const { return node_->children; }

std::size_t Formula::bound_level() const {
  if (!is_quantifier()) throw DomainError("formula is not a quantifier");
  return node_->bound;
}

std::size_t Formula::level() const { return node_->level; }
std::size_t Formula::atom_count() const { return node_->atoms; }
bool Formula::quantifier_free() const { return node_->quantifier_free; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False: return true;
    case Formula::Kind::Atom: return a.constraint() == b.constraint();
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      if (a.bound_level() != b.bound_level()) return false;
      [[fallthrough]];
    default: return a.children() == b.children();
  }
}

std::string Formula::to_string(const VarOrder* vars) const {
  auto wrap = [&](const Formula& c) {
    std::string s = c.to_string(vars);
    return c.kind() == Kind::And || c.kind() == Kind::Or ? "(" + s + ")" : s;
  };
  switch (kind()) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::Atom: return constraint().to_string(vars);
    case Kind::Not: return "not (" + children()[0].to_string(vars) + ")";
    case Kind::And:
    case Kind::Or: {
      std::string out;
      for (std::size_t k = 0; k < children().size(); ++k) {
        if (k > 0) out += kind() == Kind::And ? " and " : " or ";
        out += wrap(children()[k]);
      }
      return out;
    }
    case Kind::Exists:
    case Kind::Forall: {
      std::string name = vars ? vars->name(bound_level()) : "x" + std::to_string(bound_level());
      return std::string(kind() == Kind::Exists ? "exists " : "forall ") + name + ". " + wrap(children()[0]);
    }
  }
  return "?";
}

namespace {

void collect_atoms(const Formula& f, std::vector<Constraint>& out) {
  if (f.is_atom()) {
    out.push_back(f.constraint());
    return;
  }
  for (const auto& c : f.children()) collect_atoms(c, out);
}

using AtomTruth = std::function<TruthValue(const Constraint&)>;

TruthValue eval3(const Formula& f, const AtomTruth& at) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True: return TruthValue::True;
    case K::False: return TruthValue::False;
    case K::Atom: return at(f.constraint());
    case K::Not: {
      TruthValue t = eval3(f.children()[0], at);
      if (t == TruthValue::Undetermined) return t;
      return t == TruthValue::True ? TruthValue::False : TruthValue::True;
    }
    case K::And:
    case K::Or: {
      TruthValue absorbing = f.kind() == K::And ? TruthValue::False : TruthValue::True;
      bool undetermined = false;
      for (const auto& c : f.children()) {
        TruthValue t = eval3(c, at);
        if (t == absorbing) return absorbing;
        if (t == TruthValue::Undetermined) undetermined = true;
      }
      if (undetermined) return TruthValue::Undetermined;
      return absorbing == TruthValue::False ? TruthValue::True : TruthValue::False;
    }
    default: throw DomainError("evaluation of a quantified formula");
  }
}

// Signs of polynomials at a fixed sample, cached by canonical form.
class SignCache {
 public:
  explicit SignCache(const SamplePoint& s) : s_(s) {}

  std::optional<int> sign(const Polynomial& canon) {
    if (canon.level() > s_.size()) return std::nullopt;
    auto it = cache_.find(canon);
    if (it != cache_.end()) return it->second;
    int v = sign_at(canon, s_);
    cache_.emplace(canon, v);
    return v;
  }

 private:
  const SamplePoint& s_;
  std::map<Polynomial, int> cache_;
};

TruthValue atom_at(const Constraint& c, SignCache& cache) {
  Constraint n = c.normalized();
  auto sg = cache.sign(n.lhs);
  if (!sg) return TruthValue::Undetermined;
  if (n.lhs.is_constant()) return truth(n.holds(sgn(n.lhs.constant_value())));
  return truth(n.holds(*sg));
}

using MaskMap = std::map<Polynomial, SignMask>;

TruthValue atom_under(const Constraint& c, const MaskMap& masks) {
  Constraint n = c.normalized();
  if (n.lhs.is_constant()) return truth(n.holds(sgn(n.lhs.constant_value())));
  auto it = masks.find(n.lhs);
  SignMask m = it == masks.end() ? kAnySign : it->second;
  SignMask sat = satisfying_signs(n.rel);
  if ((m & ~sat) == 0) return TruthValue::True;
  if ((m & sat) == 0) return TruthValue::False;
  return TruthValue::Undetermined;
}

constexpr std::size_t kEnumerationBudget = 6561;

// Evaluates f for every refinement of the masks to single signs of the
// polynomials that matter; Undetermined unless all refinements agree.
TruthValue enumerate(const Formula& f, MaskMap& masks, std::size_t& budget) {
  if (budget == 0) return TruthValue::Undetermined;
  --budget;
  std::optional<Polynomial> pivot;
  TruthValue t = eval3(f, [&](const Constraint& c) {
    TruthValue v = atom_under(c, masks);
    if (v == TruthValue::Undetermined && !pivot) pivot = c.normalized().lhs;
    return v;
  });
  if (t != TruthValue::Undetermined || !pivot) return t;
  auto it = masks.find(*pivot);
  SignMask m = it == masks.end() ? kAnySign : it->second;
  std::optional<TruthValue> common;
  for (SignMask bit : {kNegative, kZero, kPositive}) {
    if (!(m & bit)) continue;
    masks[*pivot] = bit;
    TruthValue r = enumerate(f, masks, budget);
    if (r == TruthValue::Undetermined || (common && *common != r)) {
      common = TruthValue::Undetermined;
      break;
    }
    common = r;
  }
  if (it == masks.end())
    masks.erase(*pivot);
  else
    masks[*pivot] = m;
  return common.value_or(TruthValue::Undetermined);
}

bool add_mask(MaskMap& masks, const Literal& l) {
  Constraint n = l.constraint.normalized();
  SignMask sat = satisfying_signs(n.rel);
  SignMask m = l.positive ? sat : (kAnySign & ~sat);
  if (n.lhs.is_constant()) return (m & mask_of_sign(sgn(n.lhs.constant_value()))) != 0;
  auto [it, fresh] = masks.emplace(n.lhs, m);
  if (!fresh) it->second &= m;
  return it->second != 0;
}

// Literals of f of level <= |s| that are true at s, in textual order, deduplicated.
std::vector<Literal> sample_literals(const Formula& f, SignCache& cache, std::size_t j) {
  std::vector<Literal> out;
  std::vector<Constraint> as;
  collect_atoms(f, as);
  for (auto& c : as) {
    if (c.level() > j) continue;
    Literal l{c, atom_at(c, cache) == TruthValue::True};
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(std::move(l));
  }
  return out;
}

TruthValue evaluate_with(const Formula& f, const SamplePoint& s, SignCache& cache) {
  TruthValue t = eval3(f, [&](const Constraint& c) { return atom_at(c, cache); });
  if (t != TruthValue::Undetermined) return t;
  MaskMap masks;
  for (const auto& l : sample_literals(f, cache, s.size())) add_mask(masks, l);
  std::size_t budget = kEnumerationBudget;
  return enumerate(f, masks, budget);
}

struct Collector {
  SignCache& cache;
  std::vector<Literal> out;

  TruthValue value(const Formula& f) {
    return eval3(f, [&](const Constraint& c) { return atom_at(c, cache); });
  }

  void add(Literal l) {
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(std::move(l));
  }

  // f evaluates to `target` at the sample.
  void collect(const Formula& f, TruthValue target) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::True:
      case K::False: return;
      case K::Atom: add(Literal{f.constraint(), target == TruthValue::True}); return;
      case K::Not:
        collect(f.children()[0], target == TruthValue::True ? TruthValue::False : TruthValue::True);
        return;
      case K::And:
      case K::Or: {
        TruthValue all = f.kind() == K::And ? TruthValue::True : TruthValue::False;
        if (target == all) {
          for (const auto& c : f.children()) collect(c, target);
          return;
        }
        const Formula* best = nullptr;
        for (const auto& c : f.children()) {
          if (value(c) != target) continue;
          if (!best || c.level() < best->level() ||
              (c.level() == best->level() && c.atom_count() < best->atom_count()))
            best = &c;
        }
        if (!best) throw DomainError("implicant: inconsistent evaluation");
        collect(*best, target);
        return;
      }
      default: throw DomainError("implicant of a quantified formula");
    }
  }
};

}  // namespace

std::vector<Constraint> atoms(const Formula& f) {
  std::vector<Constraint> out;
  collect_atoms(f, out);
  return out;
}

std::vector<Polynomial> polynomials(const Formula& f) {
  std::set<Polynomial> ps;
  for (const auto& c : atoms(f)) {
    Constraint n = c.normalized();
    if (!n.lhs.is_constant()) ps.insert(n.lhs);
  }
  return {ps.begin(), ps.end()};
}

bool holds(const Formula& f, std::span<const Rational> point) {
  TruthValue t = eval3(f, [&](const Constraint& c) {
    if (c.level() > point.size()) throw DomainError("point does not assign every variable");
    return truth(c.holds(sgn(c.lhs.evaluate(point))));
  });
  return t == TruthValue::True;
}

bool holds(const Formula& f, const SamplePoint& s) {
  SignCache cache(s);
  TruthValue t = eval3(f, [&](const Constraint& c) { return atom_at(c, cache); });
  if (t == TruthValue::Undetermined) throw DomainError("point does not assign every variable");
  return t == TruthValue::True;
}

TruthValue evaluate_kleene(const Formula& f, const SamplePoint& s) {
  SignCache cache(s);
  return eval3(f, [&](const Constraint& c) { return atom_at(c, cache); });
}

TruthValue evaluate(const Formula& f, const SamplePoint& s) {
  SignCache cache(s);
  return evaluate_with(f, s, cache);
}

SignMask Literal::signs() const {
  SignMask sat = satisfying_signs(constraint.rel);
  return positive ? sat : (kAnySign & ~sat);
}

Formula Literal::formula() const {
  Formula a = Formula::atom(constraint);
  return positive ? a : Formula::negation(a);
}

Formula Implicant::formula() const {
  std::vector<Formula> fs;
  for (const auto& l : literals) fs.push_back(l.formula());
  return Formula::conjunction(std::move(fs));
}

std::vector<Polynomial> Implicant::polynomials() const {
  std::set<Polynomial> ps;
  for (const auto& l : literals) {
    Constraint n = l.constraint.normalized();
    if (!n.lhs.is_constant()) ps.insert(n.lhs);
  }
  return {ps.begin(), ps.end()};
}

bool entails(const std::vector<Literal>& literals, const Formula& f, TruthValue target) {
  MaskMap masks;
  for (const auto& l : literals)
    if (!add_mask(masks, l)) return true;
  std::size_t budget = kEnumerationBudget;
  return enumerate(f, masks, budget) == target;
}

Implicant implicant(const Formula& f, const SamplePoint& s) {
  SignCache cache(s);
  Collector col{cache, {}};
  Implicant result;
  TruthValue t = col.value(f);
  if (t != TruthValue::Undetermined) {
    col.collect(f, t);
    result.literals = std::move(col.out);
  } else {
    t = evaluate_with(f, s, cache);
    if (t == TruthValue::Undetermined) throw DomainError("implicant: formula undetermined at sample");
    result.literals = sample_literals(f, cache, s.size());
  }
  result.value = t;
  for (std::size_t k = 0; k < result.literals.size();) {
    std::vector<Literal> trial = result.literals;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
    if (entails(trial, f, t))
      result.literals = std::move(trial);
    else
      ++k;
  }
  return result;
}

// ---------------------------------------------------------------------------

Formula push_negations(const Formula& f) {
  std::function<Formula(const Formula&, bool)> go = [&](const Formula& g, bool neg) -> Formula {
    using K = Formula::Kind;
    switch (g.kind()) {
      case K::True: return neg ? Formula::bottom() : g;
      case K::False: return neg ? Formula::top() : g;
      case K::Atom: return neg ? Formula::negation(g) : g;
      case K::Not: return go(g.children()[0], !neg);
      case K::And:
      case K::Or: {
        std::vector<Formula> cs;
        for (const auto& c : g.children()) cs.push_back(go(c, neg));
        bool is_and = (g.kind() == K::And) != neg;
        return is_and ? Formula::conjunction(std::move(cs)) : Formula::disjunction(std::move(cs));
      }
      case K::Exists:
      case K::Forall: {
        bool ex = (g.kind() == K::Exists) != neg;
        return Formula::quantified(ex ? Quantifier::Exists : Quantifier::Forall, g.bound_level(),
                                   go(g.children()[0], neg));
      }
    }
    return g;
  };
  return go(f, false);
}

std::vector<QuantifierBlock> PrenexFormula::blocks() const {
  std::vector<QuantifierBlock> out;
  for (std::size_t j = 0; j < prefix.size(); ++j) {
    std::size_t level = free_count + 1 + j;
    if (!out.empty() && out.back().quantifier == prefix[j])
      out.back().last = level;
    else
      out.push_back({prefix[j], level, level});
  }
  return out;
}

Formula PrenexFormula::formula() const {
  Formula f = matrix;
  for (std::size_t j = prefix.size(); j-- > 0;) f = Formula::quantified(prefix[j], free_count + 1 + j, f);
  return f;
}

Formula map_constraints(const Formula& f, const std::function<Constraint(const Constraint&)>& fn) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False: return f;
    case K::Atom: return Formula::atom(fn(f.constraint()));
    case K::Not: return Formula::negation(map_constraints(f.children()[0], fn));
    case K::And:
    case K::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(map_constraints(c, fn));
      return f.kind() == K::And ? Formula::conjunction(std::move(cs)) : Formula::disjunction(std::move(cs));
    }
    default: throw DomainError("map_constraints on a quantified formula");
  }
}

Formula substitute(const Formula& f, std::span<const Rational> values) {
  return map_constraints(f, [&](const Constraint& c) { return Constraint{c.lhs.substitute(values), c.rel}; });
}

namespace {

void scan_variables(const Formula& f, std::set<std::size_t>& scope, std::set<std::size_t>& free,
                    std::set<std::size_t>& bound) {
  if (f.is_atom()) {
    for (auto v : f.constraint().lhs.variables())
      if (!scope.count(v)) free.insert(v);
    return;
  }
  if (f.is_quantifier()) {
    std::size_t v = f.bound_level();
    bound.insert(v);
    bool fresh = scope.insert(v).second;
    scan_variables(f.children()[0], scope, free, bound);
    if (fresh) scope.erase(v);
    return;
  }
  for (const auto& c : f.children()) scan_variables(c, scope, free, bound);
}

struct Puller {
  std::size_t next_temp;
  std::set<std::size_t> used;
  std::vector<std::pair<Quantifier, std::size_t>> prefix;  // temp levels
  std::map<std::size_t, std::size_t> origin;                // temp level -> original level

  Formula pull(const Formula& f, std::map<std::size_t, std::size_t> scope) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Atom: {
        if (scope.empty()) return f;
        std::size_t top = f.constraint().lhs.level();
        std::vector<std::size_t> table(top);
        for (std::size_t k = 0; k < top; ++k) {
          auto it = scope.find(k + 1);
          table[k] = it == scope.end() ? k + 1 : it->second;
        }
        return Formula::atom(rename_variables(f.constraint().lhs, table), f.constraint().rel);
      }
      case K::Exists:
      case K::Forall: {
        std::size_t v = f.bound_level();
        std::size_t target = next_temp++;
        origin[target] = v;
        scope[v] = target;
        prefix.emplace_back(f.kind() == K::Exists ? Quantifier::Exists : Quantifier::Forall, target);
        return pull(f.children()[0], scope);
      }
      case K::Not: return Formula::negation(pull(f.children()[0], scope));
      case K::And:
      case K::Or: {
        std::vector<Formula> cs;
        for (const auto& c : f.children()) cs.push_back(pull(c, scope));
        return f.kind() == K::And ? Formula::conjunction(std::move(cs)) : Formula::disjunction(std::move(cs));
      }
      default: return f;
    }
  }
};

}  // namespace

PrenexFormula to_prenex(const Formula& input, const VarOrder& vars) {
  Formula f = push_negations(input);
  std::set<std::size_t> scope, free, bound;
  scan_variables(f, scope, free, bound);
  for (auto v : free)
    if (bound.count(v)) throw DomainError("variable " + vars.name(v) + " occurs both free and bound");

  std::size_t top = std::max({vars.size(), f.level(), std::size_t{0}});
  for (std::size_t v = 1; v <= vars.size(); ++v)
    if (!bound.count(v)) free.insert(v);

  Puller puller{top + 1, {}, {}, {}};
  Formula matrix = puller.pull(f, {});

  // Final numbering: free variables in order, then the prefix.
  std::size_t total = top + puller.prefix.size();
  std::vector<std::size_t> table(total, 0);
  PrenexFormula out;
  std::set<std::string> names;
  auto unique_name = [&](std::string base) {
    std::string n = base;
    for (int k = 1; names.count(n); ++k) n = base + "_" + std::to_string(k);
    names.insert(n);
    return n;
  };
  std::vector<std::string> new_names;
  std::size_t level = 0;
  for (auto v : free) {
    table[v - 1] = ++level;
    new_names.push_back(unique_name(vars.name(v)));
  }
  out.free_count = level;
  for (auto& [q, temp] : puller.prefix) {
    table[temp - 1] = ++level;
    out.prefix.push_back(q);
    new_names.push_back(unique_name(vars.name(puller.origin[temp])));
  }
  for (std::size_t k = 0; k < total; ++k)
    if (table[k] == 0) table[k] = ++level;  // bound-only names that never reach the matrix
  out.vars = VarOrder(new_names);
  out.matrix = map_constraints(matrix, [&](const Constraint& c) {
    return Constraint{rename_variables(c.lhs, table), c.rel};
  });
  return out;
}

}  // namespace nucad
