#pragma once

#include <string>
#include <vector>

#include "nucad/polynomial.hpp"
#include "nucad/rational.hpp"

namespace nucad {

/// Dense univariate polynomial over Q, coefficients from degree 0 upwards.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs);
  static UPoly from_polynomial(const Polynomial& p, std::size_t level);
  Polynomial to_polynomial(std::size_t level) const;

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& operator[](std::size_t k) const { return c_[k]; }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational eval(const Rational& x) const;
  int sign_at(const Rational& x) const;
  UPoly derivative() const;
  /// Associate with coprime integer coefficients and positive leading coefficient.
  std::vector<Integer> integer_coeffs() const;
  UPoly monic() const;

  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend bool operator==(const UPoly&, const UPoly&) = default;

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Quotient and remainder over Q.
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
/// Monic gcd (zero when both are zero).
UPoly gcd(const UPoly& a, const UPoly& b);
/// a / gcd(a, a'), with integer coefficients.
UPoly square_free(const UPoly& a);

/// Positive lower bound on |r| for every nonzero root r (requires p(0) != 0).
Rational root_lower_bound(const UPoly& p);
/// Upper bound on |r| for every root r.
Rational root_upper_bound(const UPoly& p);

}  // namespace nucad
