#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nucad/formula.hpp"
#include "nucad/nucad.hpp"
#include "nucad/onecell.hpp"

namespace nucad {

/// Coalesces adjacent siblings carrying the same label and replaces every
/// label-uniform subtree by a leaf. Siblings are adjacent when one's upper
/// bound is the other's lower bound (same indexed root) with complementary
/// closedness. Idempotent; preserves the labelling pointwise.
NuCadTree merge_tree(const NuCadTree& t);

/// x_level rel root(x_level, poly, index).
struct RootAtom {
  std::size_t level = 0;
  Relation rel = Relation::EQ;
  IndexedRoot root;

  friend bool operator==(const RootAtom&, const RootAtom&) = default;
};

/// Boolean combination of polynomial constraints and root atoms.
class SolutionFormula {
 public:
  enum class Kind { True, False, Constraint, Root, Not, And, Or };

  SolutionFormula();  // true
  static SolutionFormula top();
  static SolutionFormula bottom();
  static SolutionFormula constraint(Constraint c);
  static SolutionFormula root_atom(RootAtom a);
  /// Simplifying constructors: constants are folded, double negation removed,
  /// nested and/or flattened and duplicate operands dropped.
  static SolutionFormula negation(SolutionFormula f);
  static SolutionFormula conjunction(std::vector<SolutionFormula> fs);
  static SolutionFormula disjunction(std::vector<SolutionFormula> fs);

  Kind kind() const;
  const Constraint& as_constraint() const;
  const RootAtom& as_root() const;
  const std::vector<SolutionFormula>& children() const;
  std::size_t atom_count() const;
  bool has_root_atoms() const;

  /// Truth at a point covering all levels of the formula. A root atom whose
  /// root does not exist at the point is false.
  bool holds(const SamplePoint& x) const;

  std::string to_string(const VarOrder* vars = nullptr) const;
  /// SMT-LIB term. With `pure`, every root atom is replaced by an existential
  /// over a fresh variable y with p(.., y) = 0 and x rel y, which over-approximates
  /// it; otherwise root atoms print as (rel x (root x p k)).
  std::string to_smtlib(const VarOrder& vars, bool pure = false) const;

  friend bool operator==(const SolutionFormula& a, const SolutionFormula& b);

 private:
  struct Node;
  explicit SolutionFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Atoms describing x_level in I; ordinary constraints when the bound is
/// expressible by its polynomial (linear in x_level with a constant leading
/// coefficient), root atoms otherwise.
std::vector<SolutionFormula> interval_atoms(const SymbolicInterval& I);

/// Formula defining the TRUE cells of a (merged) tree. For every subtree the
/// smaller of the direct encoding and the negated encoding of its FALSE part
/// is taken, counted in atoms; ties keep the direct one.
SolutionFormula emit_formula(const NuCadTree& t);

/// SMT-LIB terms for numbers, polynomials and relations.
std::string rational_smtlib(const Rational& q);
std::string polynomial_smtlib(const Polynomial& p, const VarOrder& vars);
std::string relation_smtlib(Relation rel, const std::string& lhs, const std::string& rhs);

/// Table of run statistics.
struct StatsReport {
  std::uint64_t atoms = 0;  // atoms of the solution formula, or of the input when there is none
  std::uint64_t cells = 0;  // explored cells
  std::uint64_t leaves = 0; // leaves of the output tree before merging (0 without a tree)
  std::uint64_t symbolic_intervals = 0;
  std::uint64_t sections = 0;
  double real_root_seconds = 0;
  double non_algebraic_seconds = 0;
  double total_seconds = 0;
  bool aborted = false;

  static std::string csv_header(bool with_times = true);
  std::string csv_row(bool with_times = true) const;
  std::string to_text(bool with_times = true) const;
};

StatsReport collect_stats(const SolveStats& stats, const NuCadTree* tree = nullptr,
                          const SolutionFormula* formula = nullptr);

}  // namespace nucad
