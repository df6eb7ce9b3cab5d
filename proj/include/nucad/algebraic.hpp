#pragma once

#include <string>
#include <vector>

#include "nucad/rational.hpp"
#include "nucad/upoly.hpp"

namespace nucad {

/// A real algebraic number: either an exact rational or the unique root of a
/// square-free integer polynomial inside an open isolating interval whose
/// endpoints are not roots.
///
/// Refinement shrinks the interval in place; the denoted number never changes.
/// Refinement may discover that the number is rational, after which it is
/// stored as such.
class AlgebraicNumber {
 public:
  AlgebraicNumber() : value_(0) {}
  AlgebraicNumber(const Rational& r) : value_(r) {}  // NOLINT(implicit)
  AlgebraicNumber(long v) : value_(v) {}             // NOLINT(implicit)

  /// The root of `defining` in (lo, hi). Preconditions: defining is square-free,
  /// has exactly one root in the open interval and none at the endpoints.
  static AlgebraicNumber root_of(const UPoly& defining, Rational lo, Rational hi);

  bool is_rational() const { return rational_; }
  /// Throws DomainError when the number is not stored as a rational.
  const Rational& rational() const;
  /// Defining polynomial (x - r for rationals).
  UPoly defining() const;
  Rational lower() const { return rational_ ? value_ : lo_; }
  Rational upper() const { return rational_ ? value_ : hi_; }
  Rational width() const { return rational_ ? Rational(0) : Rational(hi_ - lo_); }

  /// One bisection step (no-op for rationals).
  void refine() const;
  /// Refines until the interval width is below `w`.
  void refine_below(const Rational& w) const;

  AlgebraicNumber operator-() const;

  double approx() const;
  /// "algebraic(<poly>, (<lo>, <hi>))" or the rational value.
  std::string to_string() const;
  /// Decimal approximation with `digits` fractional digits.
  std::string to_decimal(int digits = 6) const;

 private:
  void become_rational(const Rational& r) const;

  mutable bool rational_ = true;
  mutable Rational value_;
  UPoly poly_;
  mutable Rational lo_, hi_;
  mutable int sign_lo_ = 0;
};

/// Exact three-way comparison: -1, 0 or +1.
int compare(const AlgebraicNumber& a, const AlgebraicNumber& b);

inline bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) { return compare(a, b) == 0; }
inline bool operator<(const AlgebraicNumber& a, const AlgebraicNumber& b) { return compare(a, b) < 0; }

/// Exact floor.
Integer floor(const AlgebraicNumber& a);

/// Coordinates of a point; entry k-1 belongs to level k.
using SamplePoint = std::vector<AlgebraicNumber>;

std::string to_string(const SamplePoint& s);

}  // namespace nucad
