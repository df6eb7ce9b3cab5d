#include "nucad/upoly.hpp"

#include <sstream>

#include "nucad/errors.hpp"

namespace nucad {

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

UPoly UPoly::from_polynomial(const Polynomial& p, std::size_t level) {
  for (std::size_t v : p.variables())
    if (v != level) throw DomainError("polynomial is not univariate in the requested variable");
  std::vector<Rational> c(p.degree(level) + 1, 0);
  for (const auto& [e, v] : p.terms()) c[level <= e.size() ? e[level - 1] : 0] = v;
  if (p.is_zero()) c.clear();
  return UPoly(std::move(c));
}

Polynomial UPoly::to_polynomial(std::size_t level) const {
  std::vector<Polynomial> cs;
  cs.reserve(c_.size());
  for (const auto& v : c_) cs.push_back(Polynomial::constant(v));
  return Polynomial::from_coefficients(cs, level);
}

Rational UPoly::eval(const Rational& x) const {
  Rational acc = 0;
  for (std::size_t k = c_.size(); k-- > 0;) {
    acc *= x;
    acc += c_[k];
  }
  return acc;
}

int UPoly::sign_at(const Rational& x) const { return sgn(eval(x)); }

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return UPoly();
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<unsigned long>(k);
  return UPoly(std::move(d));
}

std::vector<Integer> UPoly::integer_coeffs() const {
  std::vector<Integer> out;
  if (c_.empty()) return out;
  Integer den = 1;
  for (const auto& v : c_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  out.reserve(c_.size());
  Integer g = 0;
  for (const auto& v : c_) {
    Integer z = v.get_num() * (den / v.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    out.push_back(std::move(z));
  }
  if (sgn(out.back()) < 0) g = -g;
  for (auto& z : out) z /= g;
  return out;
}

UPoly UPoly::monic() const {
  if (c_.empty()) return *this;
  Rational lc = c_.back();
  std::vector<Rational> out(c_);
  for (auto& v : out) v /= lc;
  return UPoly(std::move(out));
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t k = 0; k < a.c_.size(); ++k) out[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) out[k] += b.c_[k];
  return UPoly(std::move(out));
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()), 0);
  for (std::size_t k = 0; k < a.c_.size(); ++k) out[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) out[k] -= b.c_[k];
  return UPoly(std::move(out));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  std::vector<Rational> out(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  return UPoly(std::move(out));
}

std::string UPoly::to_string(const std::string& var) const {
  return to_polynomial(1).to_string(VarOrder(std::vector<std::string>{var}));
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  if (a.degree() < b.degree()) return {UPoly(), a};
  std::vector<Rational> r = a.coeffs();
  std::vector<Rational> q(a.degree() - b.degree() + 1, 0);
  const Rational lc = b.leading();
  int db = b.degree();
  for (int k = a.degree(); k >= db; --k) {
    if (sgn(r[k]) == 0) continue;
    Rational f = r[k] / lc;
    q[k - db] = f;
    for (int j = 0; j <= db; ++j) r[k - db + j] -= f * b[j];
  }
  r.resize(db);
  return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a, y = b;
  while (!y.is_zero()) {
    UPoly r = divmod(x, y).second;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

UPoly square_free(const UPoly& a) {
  if (a.degree() <= 0) return a;
  UPoly g = gcd(a, a.derivative());
  UPoly q = g.degree() > 0 ? divmod(a, g).first : a;
  std::vector<Rational> c;
  for (auto& z : q.integer_coeffs()) c.emplace_back(z);
  return UPoly(std::move(c));
}

Rational root_upper_bound(const UPoly& p) {
  if (p.degree() <= 0) return 1;
  Rational lc = abs(p.leading());
  Rational m = 0;
  for (int k = 0; k < p.degree(); ++k) m = std::max(m, Rational(abs(p[k]) / lc));
  return m + 1;
}

Rational root_lower_bound(const UPoly& p) {
  if (p.is_zero() || sgn(p[0]) == 0) throw DomainError("root lower bound needs a nonzero constant term");
  Rational a0 = abs(p[0]);
  Rational m = 0;
  for (int k = 1; k <= p.degree(); ++k) m = std::max(m, abs(p[k]));
  return a0 / (a0 + m);
}

}  // namespace nucad
