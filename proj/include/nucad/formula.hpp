#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nucad/algebraic.hpp"
#include "nucad/polynomial.hpp"

namespace nucad {

enum class Relation { EQ, NE, LT, LE, GT, GE };

/// Sign mask bits: 1 = negative, 2 = zero, 4 = positive.
using SignMask = unsigned;
inline constexpr SignMask kNegative = 1, kZero = 2, kPositive = 4, kAnySign = 7;
SignMask mask_of_sign(int sign);

Relation negate(Relation r);
/// The relation r' with (-p r' 0) iff (p r 0).
Relation mirror(Relation r);
/// Signs of the left-hand side for which the relation holds.
SignMask satisfying_signs(Relation r);
std::string to_string(Relation r);

/// p ~ 0.
struct Constraint {
  Polynomial lhs;
  Relation rel = Relation::EQ;

  bool holds(int sign) const { return (satisfying_signs(rel) & mask_of_sign(sign)) != 0; }
  std::size_t level() const { return lhs.level(); }
  /// Same constraint over canonical(lhs); the relation is mirrored when needed.
  Constraint normalized() const;
  std::string to_string(const VarOrder* vars = nullptr) const;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

enum class TruthValue { False, True, Undetermined };
std::string to_string(TruthValue t);
inline TruthValue truth(bool b) { return b ? TruthValue::True : TruthValue::False; }

enum class Quantifier { Exists, Forall };

/// Immutable formula tree over constraints. Quantified variables are levels of
/// the same variable order as the atoms.
class Formula {
 public:
  enum class Kind { True, False, Atom, Not, And, Or, Exists, Forall };

  Formula();  // true
  static Formula top();
  static Formula bottom();
  static Formula atom(Constraint c);
  static Formula atom(Polynomial lhs, Relation rel);
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> fs);
  static Formula disjunction(std::vector<Formula> fs);
  static Formula quantified(Quantifier q, std::size_t level, Formula body);

  Kind kind() const;
  bool is_atom() const { return kind() == Kind::Atom; }
  bool is_quantifier() const { return kind() == Kind::Exists || kind() == Kind::Forall; }
  const Constraint& constraint() const;
  /// Children of not/and/or, or the body of a quantifier.
  const std::vector<Formula>& children() const;
  std::size_t bound_level() const;

  /// Highest level of any atom (0 when there are none).
  std::size_t level() const;
  std::size_t atom_count() const;
  bool quantifier_free() const;

  std::string to_string(const VarOrder* vars = nullptr) const;
  std::string to_string(const VarOrder& vars) const { return to_string(&vars); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Atoms in left-to-right order (with repetitions).
std::vector<Constraint> atoms(const Formula& f);
/// Canonical polynomials of all atoms, sorted and deduplicated.
std::vector<Polynomial> polynomials(const Formula& f);

/// Applies fn to every atom of a quantifier-free formula.
Formula map_constraints(const Formula& f, const std::function<Constraint(const Constraint&)>& fn);
/// Substitutes values[k] for x_{k+1} in every atom.
Formula substitute(const Formula& f, std::span<const Rational> values);

/// Truth of a quantifier-free formula at a full rational point.
bool holds(const Formula& f, std::span<const Rational> point);
/// Truth of a quantifier-free formula at a full sample point.
bool holds(const Formula& f, const SamplePoint& s);

/// Three-valued short-circuit evaluation: atoms of level > |s| are undetermined.
TruthValue evaluate_kleene(const Formula& f, const SamplePoint& s);

/// Decides whether f[s] is constant. Kleene evaluation first; when that is
/// undetermined, the polynomials of the undetermined atoms are grouped by
/// canonical form and every combination of their signs is tried, with the
/// atoms of level <= |s| restricted to the sign sets of their truth values.
TruthValue evaluate(const Formula& f, const SamplePoint& s);

/// A constraint or its negation.
struct Literal {
  Constraint constraint;
  bool positive = true;

  SignMask signs() const;
  Formula formula() const;
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Implicant {
  std::vector<Literal> literals;
  TruthValue value = TruthValue::Undetermined;

  Formula formula() const;
  /// Canonical polynomials of the literals, sorted and deduplicated.
  std::vector<Polynomial> polynomials() const;
};

/// Whether the conjunction of the literals entails f (target TRUE) or not f
/// (target FALSE), treating distinct canonical polynomials as independent.
bool entails(const std::vector<Literal>& literals, const Formula& f, TruthValue target);

/// A conjunction of literals over constraints of f, all of level <= |s| and
/// true at s, entailing f or its negation. Throws DomainError when f[s] is
/// undetermined.
Implicant implicant(const Formula& f, const SamplePoint& s);

struct QuantifierBlock {
  Quantifier quantifier;
  std::size_t first;  // levels first..last
  std::size_t last;
};

/// Q_{k+1} x_{k+1} ... Q_n x_n . matrix, with the free variables x_1..x_k.
struct PrenexFormula {
  Formula matrix;
  std::vector<Quantifier> prefix;  // entry j quantifies level free_count + 1 + j
  std::size_t free_count = 0;
  VarOrder vars;

  std::size_t variable_count() const { return free_count + prefix.size(); }
  std::vector<QuantifierBlock> blocks() const;
  /// The quantified formula in tree form.
  Formula formula() const;
};

/// Negation normal form with quantifiers pulled outward. Free variables keep
/// their relative order and come first; bound variables follow in prefix
/// order. Unbound variables of `vars` count as free even if unused.
/// Throws DomainError when a bound variable also occurs free or is bound twice
/// on one path.
PrenexFormula to_prenex(const Formula& f, const VarOrder& vars);

/// Negation normal form; negations end up directly above atoms.
Formula push_negations(const Formula& f);

}  // namespace nucad
