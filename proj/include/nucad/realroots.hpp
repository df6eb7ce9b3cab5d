#pragma once

#include <optional>
#include <vector>

#include "nucad/algebraic.hpp"
#include "nucad/polynomial.hpp"
#include "nucad/upoly.hpp"

namespace nucad {

/// Strictly increasing sequence of real roots.
using RootList = std::vector<AlgebraicNumber>;

/// Real roots of p, one isolating interval per distinct root. Constants give
/// the empty list; p = 0 is rejected with DomainError.
RootList isolate_roots(const UPoly& p);
/// Same for a polynomial in a single variable (any level).
RootList isolate_roots(const Polynomial& p);

/// Result of substituting a sample into a polynomial of higher level.
struct RootsAtSample {
  bool nullified = false;
  RootList roots;
};

/// Sorted real roots in x_level(p) of p(s_1, ..., s_{level-1}). `nullified` is set
/// when the substituted polynomial vanishes identically.
RootsAtSample roots_at_sample(const Polynomial& p, const SamplePoint& s);

/// Exact sign of p(s); s must assign every variable of p.
int sign_at(const Polynomial& p, const SamplePoint& s);

/// p(s) as an algebraic number; s must assign every variable of p.
AlgebraicNumber evaluate_at(const Polynomial& p, const SamplePoint& s);

/// p with every rational coordinate of s substituted. Variables whose
/// coordinate is an irrational algebraic number, or beyond |s|, remain.
Polynomial substitute_rationals(const Polynomial& p, const SamplePoint& s);

/// Partial evaluation p[s]: a value when s assigns every variable of p,
/// otherwise the polynomial in the remaining variables (with the rational
/// coordinates substituted; algebraic coordinates stay symbolic in `residual`).
struct PartialValue {
  std::optional<AlgebraicNumber> value;
  Polynomial residual;
};
PartialValue eval_partial(const Polynomial& p, const SamplePoint& s);

/// The simplest rational strictly between lo and hi (absent = infinite):
/// 0 if possible, else the integer nearest 0, else the smallest denominator.
/// Throws DomainError for an empty interval.
Rational pick_rational(const std::optional<AlgebraicNumber>& lo, const std::optional<AlgebraicNumber>& hi);

/// Seconds spent in root isolation and exact sign determination by the
/// calling thread (outermost calls only).
double real_root_seconds();

}  // namespace nucad
