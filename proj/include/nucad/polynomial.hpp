#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nucad/rational.hpp"

namespace nucad {

/// Exponent vector; entry k-1 is the exponent of x_k. Always trimmed (no trailing zeros).
using Exponents = std::vector<std::uint32_t>;

/// Lexicographic order with the highest variable most significant.
struct MonomialLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Global variable order x_1 < ... < x_n; position in the vector is level - 1.
class VarOrder {
 public:
  VarOrder() = default;
  explicit VarOrder(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  /// Name of the 1-based level; levels beyond the table print as "x<level>".
  std::string name(std::size_t level) const;
  std::optional<std::size_t> level_of(std::string_view name) const;
  /// Appends a variable and returns its level. Throws DomainError on duplicates.
  std::size_t add(std::string name);
  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const VarOrder&, const VarOrder&) = default;

 private:
  std::vector<std::string> names_;
};

/// Sparse multivariate polynomial over Q in x_1..x_n.
///
/// Terms are kept in a map ordered by MonomialLess, so the last entry is the
/// lexicographic leading term. Zero coefficients are never stored.
class Polynomial {
 public:
  using Terms = std::map<Exponents, Rational, MonomialLess>;

  Polynomial() = default;
  static Polynomial constant(const Rational& c);
  static Polynomial variable(std::size_t level);
  static Polynomial monomial(Exponents exps, const Rational& c);
  /// sum_k coeffs[k] * x_level^k.
  static Polynomial from_coefficients(std::span<const Polynomial> coeffs, std::size_t level);
  /// Infix syntax: "0.5*x1 + 1/2 - x2^2". Unknown names are appended to vars when extend is set.
  static Polynomial parse(std::string_view text, VarOrder& vars, bool extend = true);
  static Polynomial parse(std::string_view text);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Value of a constant polynomial (0 for the zero polynomial).
  Rational constant_value() const;

  /// Index of the highest variable occurring (0 for constants).
  std::size_t level() const;
  std::uint32_t degree(std::size_t level) const;
  std::uint32_t total_degree() const;
  std::vector<std::size_t> variables() const;

  /// Dense coefficient list in x_level; entry k multiplies x_level^k.
  std::vector<Polynomial> coefficients(std::size_t level) const;
  Polynomial coefficient(std::size_t level, std::uint32_t deg) const;
  Polynomial leading_coefficient(std::size_t level) const;
  Polynomial derivative(std::size_t level) const;

  Polynomial substitute(std::size_t level, const Rational& value) const;
  /// Substitutes point[k-1] for x_k for every k <= point.size().
  Polynomial substitute(std::span<const Rational> point) const;
  /// Full evaluation; point must cover level().
  Rational evaluate(std::span<const Rational> point) const;

  const Terms& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  /// Coefficient of the lexicographic leading term (0 for zero).
  Rational leading_term_coefficient() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }
  /// Canonical total order: level, main degree, then terms from the leading one down.
  friend std::strong_ordering operator<=>(const Polynomial& a, const Polynomial& b);

  std::string to_string(const VarOrder* vars = nullptr) const;
  std::string to_string(const VarOrder& vars) const { return to_string(&vars); }

 private:
  void add_term(const Exponents& e, const Rational& c);
  Terms terms_;
};

Polynomial pow(const Polynomial& p, std::uint32_t exp);

/// lc_level(b)^(deg a - deg b + 1) * a mod b in x_level.
Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, std::size_t level);
/// Exact quotient a / b, or nullopt when b does not divide a.
std::optional<Polynomial> try_divide(const Polynomial& a, const Polynomial& b);
/// Exact quotient; throws DomainError when b does not divide a.
Polynomial divide_exact(const Polynomial& a, const Polynomial& b);

/// Integer-primitive associate with positive lexicographic leading coefficient.
Polynomial canonical(const Polynomial& p);
/// The rational c with p = c * canonical(p) (0 for the zero polynomial).
Rational canonical_factor(const Polynomial& p);

/// GCD in Q[x_1..x_n], normalized with canonical().
Polynomial gcd(const Polynomial& a, const Polynomial& b);
/// GCD of the coefficients of p in x_level, normalized with canonical().
Polynomial content(const Polynomial& p, std::size_t level);
/// canonical(p / content(p, level)).
Polynomial primitive_part(const Polynomial& p, std::size_t level);

/// Resultant in x_level via the subresultant PRS. Throws DomainError on zero input.
///
/// Sign convention: the Sylvester determinant of (p, q) with p's row block first.
Polynomial resultant(const Polynomial& p, const Polynomial& q, std::size_t level);
/// (-1)^(d(d-1)/2) * res(p, dp/dx_level) / lc(p). Throws DomainError when deg_level(p) = 0.
Polynomial discriminant(const Polynomial& p, std::size_t level);
/// primitive_part(p / gcd(p, dp/dx_level)); same real variety in x_level.
Polynomial square_free_part(const Polynomial& p, std::size_t level);

/// Renames variables: x_k becomes x_{new_level[k-1]}. Levels beyond the table are kept.
Polynomial rename_variables(const Polynomial& p, const std::vector<std::size_t>& new_level);

/// Canonical square-free factors that together have the variety of p: the square-free
/// primitive part in the main variable plus the factors of the content, recursively.
/// Constants are dropped; result sorted and deduplicated.
std::vector<Polynomial> projection_factors(const Polynomial& p);

}  // namespace nucad
