#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nucad/algebraic.hpp"
#include "nucad/polynomial.hpp"

namespace nucad {

/// The index-th real root (1-based) of poly in x_level over a point of R^{level-1}.
struct IndexedRoot {
  std::size_t level = 0;
  Polynomial poly;
  std::uint32_t index = 1;

  /// Value over the first level-1 coordinates of s; nullopt when undefined.
  std::optional<AlgebraicNumber> realize(const SamplePoint& s) const;
  std::string to_string(const VarOrder* vars = nullptr) const;

  friend bool operator==(const IndexedRoot&, const IndexedRoot&) = default;
};

/// Interval with numeric ends, as realized over a concrete point.
struct RealizedInterval {
  std::optional<AlgebraicNumber> lower, upper;  // absent = infinite
  bool lower_closed = false;
  bool upper_closed = false;

  bool empty() const;
  bool is_point() const;
  bool contains(const AlgebraicNumber& x) const;
  /// The exact point of a section, else the simplest rational of the interior.
  AlgebraicNumber sample() const;
};

struct SymbolicInterval {
  std::size_t level = 0;
  std::optional<IndexedRoot> lower, upper;  // absent = infinite
  bool lower_closed = false;
  bool upper_closed = false;

  static SymbolicInterval full(std::size_t level);
  static SymbolicInterval section(IndexedRoot r);

  bool is_full() const { return !lower && !upper; }
  bool is_section() const { return lower && upper && *lower == *upper && lower_closed && upper_closed; }
  /// Realized over the first level-1 coordinates of s; nullopt when a bound is undefined.
  std::optional<RealizedInterval> realize(const SamplePoint& s) const;
  std::string to_string(const VarOrder* vars = nullptr) const;

  friend bool operator==(const SymbolicInterval&, const SymbolicInterval&) = default;
};

/// Canonical polynomials kept as a gcd-free basis per level: members of one
/// level are square-free, primitive and pairwise coprime. Each member carries a
/// flag requesting only semi-sign-invariance.
class ProjectionSet {
 public:
  ProjectionSet() = default;
  explicit ProjectionSet(const std::vector<Polynomial>& ps);

  /// Inserts the factors of p. A factor shared with an existing member keeps
  /// the flag only if both sources had it.
  void insert(const Polynomial& p, bool semi_only = false);
  void merge(const ProjectionSet& other);

  std::vector<Polynomial> at_level(std::size_t level) const;
  bool semi_only(const Polynomial& p) const;
  bool contains(const Polynomial& p) const { return members_.count(p) > 0; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  std::size_t max_level() const;
  /// Copy without the members above `level`.
  ProjectionSet below(std::size_t level) const;
  const std::map<Polynomial, bool>& members() const { return members_; }

  std::string to_string(const VarOrder* vars = nullptr) const;

 private:
  void insert_factor(Polynomial f, bool semi_only);
  std::map<Polynomial, bool> members_;
};

/// True when every coefficient of p in its main variable vanishes at s.
bool nullified_at(const Polynomial& p, const SamplePoint& s);

/// Interval around s_i delimited by the nearest roots of the level-i members
/// of P over s_1..s_{i-1}. With `half_closed`, a sector end is closed when every
/// member vanishing there is flagged semi-sign-invariant.
SymbolicInterval choose_interval(const ProjectionSet& P, const SamplePoint& s, bool half_closed = false);

/// Projection of the level-i members of P for the interval I around s (|s| = i).
/// Members below level i pass through. Throws NullificationFailure when a
/// polynomial defining a bound of I vanishes identically over s_1..s_{i-1}.
ProjectionSet compute_cell_projection(const ProjectionSet& P, const SamplePoint& s, const SymbolicInterval& I);

struct CellResult {
  std::vector<SymbolicInterval> intervals;  // levels bottom..top
  ProjectionSet residual;                   // members of level < bottom
};

/// Levelwise single-cell construction for levels top down to bottom.
CellResult construct_cell(ProjectionSet P, const SamplePoint& s, std::size_t top, std::size_t bottom = 1,
                          bool half_closed = false);

}  // namespace nucad
