#include "nucad/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "nucad/errors.hpp"

namespace nucad {

namespace {

void trim(Exponents& e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

Exponents multiply(const Exponents& a, const Exponents& b) {
  Exponents r(std::max(a.size(), b.size()), 0);
  for (std::size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) r[k] += b[k];
  return r;
}

bool divides(const Exponents& d, const Exponents& e) {
  if (d.size() > e.size()) return false;
  for (std::size_t k = 0; k < d.size(); ++k)
    if (d[k] > e[k]) return false;
  return true;
}

Exponents quotient(const Exponents& e, const Exponents& d) {
  Exponents r = e;
  for (std::size_t k = 0; k < d.size(); ++k) r[k] -= d[k];
  trim(r);
  return r;
}

std::uint32_t exponent_of(const Exponents& e, std::size_t level) {
  return level >= 1 && level <= e.size() ? e[level - 1] : 0;
}

}  // namespace

bool MonomialLess::operator()(const Exponents& a, const Exponents& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t k = a.size(); k-- > 0;) {
    if (a[k] != b[k]) return a[k] < b[k];
  }
  return false;
}

VarOrder::VarOrder(std::vector<std::string> names) {
  for (auto& n : names) add(std::move(n));
}

std::string VarOrder::name(std::size_t level) const {
  if (level >= 1 && level <= names_.size()) return names_[level - 1];
  return "x" + std::to_string(level);
}

std::optional<std::size_t> VarOrder::level_of(std::string_view name) const {
  for (std::size_t k = 0; k < names_.size(); ++k)
    if (names_[k] == name) return k + 1;
  return std::nullopt;
}

std::size_t VarOrder::add(std::string name) {
  if (level_of(name)) throw DomainError("duplicate variable '" + name + "'");
  names_.push_back(std::move(name));
  return names_.size();
}

Polynomial Polynomial::constant(const Rational& c) {
  Polynomial p;
  if (sgn(c) != 0) p.terms_.emplace(Exponents{}, c);
  return p;
}

Polynomial Polynomial::variable(std::size_t level) {
  if (level == 0) throw DomainError("variable level must be positive");
  Exponents e(level, 0);
  e[level - 1] = 1;
  Polynomial p;
  p.terms_.emplace(std::move(e), Rational(1));
  return p;
}

Polynomial Polynomial::monomial(Exponents exps, const Rational& c) {
  trim(exps);
  Polynomial p;
  if (sgn(c) != 0) p.terms_.emplace(std::move(exps), c);
  return p;
}

Polynomial Polynomial::from_coefficients(std::span<const Polynomial> coeffs, std::size_t level) {
  Polynomial p;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    for (const auto& [e, c] : coeffs[k].terms_) {
      Exponents f = e;
      if (f.size() < level) f.resize(level, 0);
      f[level - 1] += static_cast<std::uint32_t>(k);
      trim(f);
      p.add_term(f, c);
    }
  }
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return 0;
  if (!is_constant()) throw DomainError("polynomial is not constant");
  return terms_.begin()->second;
}

std::size_t Polynomial::level() const { return terms_.empty() ? 0 : terms_.rbegin()->first.size(); }

std::uint32_t Polynomial::degree(std::size_t level) const {
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, exponent_of(e, level));
  return d;
}

std::uint32_t Polynomial::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) {
    std::uint32_t s = 0;
    for (auto x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

std::vector<std::size_t> Polynomial::variables() const {
  std::vector<bool> seen;
  for (const auto& [e, c] : terms_) {
    if (seen.size() < e.size()) seen.resize(e.size(), false);
    for (std::size_t k = 0; k < e.size(); ++k)
      if (e[k] > 0) seen[k] = true;
  }
  std::vector<std::size_t> vars;
  for (std::size_t k = 0; k < seen.size(); ++k)
    if (seen[k]) vars.push_back(k + 1);
  return vars;
}

std::vector<Polynomial> Polynomial::coefficients(std::size_t level) const {
  std::vector<Polynomial> out(degree(level) + 1);
  for (const auto& [e, c] : terms_) {
    std::uint32_t d = exponent_of(e, level);
    Exponents f = e;
    if (d > 0) {
      f[level - 1] = 0;
      trim(f);
    }
    out[d].terms_.emplace(std::move(f), c);
  }
  while (out.size() > 1 && out.back().is_zero()) out.pop_back();
  return out;
}

Polynomial Polynomial::coefficient(std::size_t level, std::uint32_t deg) const {
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    if (exponent_of(e, level) != deg) continue;
    Exponents f = e;
    if (deg > 0) {
      f[level - 1] = 0;
      trim(f);
    }
    out.terms_.emplace(std::move(f), c);
  }
  return out;
}

Polynomial Polynomial::leading_coefficient(std::size_t level) const { return coefficient(level, degree(level)); }

Polynomial Polynomial::derivative(std::size_t level) const {
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    std::uint32_t d = exponent_of(e, level);
    if (d == 0) continue;
    Exponents f = e;
    f[level - 1] -= 1;
    trim(f);
    out.add_term(f, c * d);
  }
  return out;
}

Polynomial Polynomial::substitute(std::size_t level, const Rational& value) const {
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    std::uint32_t d = exponent_of(e, level);
    if (d == 0) {
      out.add_term(e, c);
      continue;
    }
    Exponents f = e;
    f[level - 1] = 0;
    trim(f);
    out.add_term(f, c * pow(value, d));
  }
  return out;
}

Polynomial Polynomial::substitute(std::span<const Rational> point) const {
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    Rational v = c;
    Exponents f = e;
    for (std::size_t k = 0; k < point.size() && k < f.size(); ++k) {
      if (f[k] > 0) {
        v *= pow(point[k], f[k]);
        f[k] = 0;
      }
    }
    trim(f);
    out.add_term(f, v);
  }
  return out;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (level() > point.size()) throw DomainError("evaluation point does not cover all variables");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational v = c;
    for (std::size_t k = 0; k < e.size(); ++k)
      if (e[k] > 0) v *= pow(point[k], e[k]);
    sum += v;
  }
  return sum;
}

Rational Polynomial::leading_term_coefficient() const {
  return terms_.empty() ? Rational(0) : terms_.rbegin()->second;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  if (a.is_zero() || b.is_zero()) return out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out.add_term(multiply(ea, eb), ca * cb);
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  *this = *this * o;
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

std::strong_ordering operator<=>(const Polynomial& a, const Polynomial& b) {
  if (auto c = a.level() <=> b.level(); c != 0) return c;
  std::size_t lv = a.level();
  if (lv > 0) {
    if (auto c = a.degree(lv) <=> b.degree(lv); c != 0) return c;
  }
  auto ia = a.terms_.rbegin();
  auto ib = b.terms_.rbegin();
  MonomialLess less;
  for (; ia != a.terms_.rend() && ib != b.terms_.rend(); ++ia, ++ib) {
    if (less(ia->first, ib->first)) return std::strong_ordering::less;
    if (less(ib->first, ia->first)) return std::strong_ordering::greater;
    int c = cmp(ia->second, ib->second);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (ia != a.terms_.rend()) return std::strong_ordering::greater;
  if (ib != b.terms_.rend()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

std::string Polynomial::to_string(const VarOrder* vars) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) out << "-";
    } else {
      out << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (e.empty() || mag != 1) {
      out << mag.get_str();
      wrote = true;
    }
    for (std::size_t k = e.size(); k-- > 0;) {
      if (e[k] == 0) continue;
      if (wrote) out << "*";
      out << (vars ? vars->name(k + 1) : "x" + std::to_string(k + 1));
      if (e[k] > 1) out << "^" << e[k];
      wrote = true;
    }
  }
  return out.str();
}

Polynomial pow(const Polynomial& p, std::uint32_t exp) {
  Polynomial result = Polynomial::constant(1);
  Polynomial base = p;
  while (exp > 0) {
    if (exp & 1U) result *= base;
    exp >>= 1U;
    if (exp > 0) base = base * base;
  }
  return result;
}

Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, std::size_t level) {
  if (b.is_zero()) throw DomainError("pseudo-remainder by zero");
  std::uint32_t db = b.degree(level);
  std::uint32_t da = a.degree(level);
  if (a.is_zero() || da < db) return a;
  Polynomial lcb = b.leading_coefficient(level);
  Polynomial r = a;
  int e = static_cast<int>(da - db) + 1;
  while (!r.is_zero() && r.degree(level) >= db) {
    std::uint32_t dr = r.degree(level);
    Exponents shift(level, 0);
    shift[level - 1] = dr - db;
    Polynomial t = r.leading_coefficient(level) * Polynomial::monomial(shift, 1);
    r = lcb * r - t * b;
    --e;
  }
  if (e > 0) r = pow(lcb, static_cast<std::uint32_t>(e)) * r;
  return r;
}

std::optional<Polynomial> try_divide(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw DomainError("division by zero polynomial");
  if (b.is_constant()) return a * Rational(1 / b.constant_value());
  Polynomial q;
  Polynomial r = a;
  const auto& [lead_b, lc_b] = *b.terms().rbegin();
  while (!r.is_zero()) {
    const auto& [lead_r, lc_r] = *r.terms().rbegin();
    if (!divides(lead_b, lead_r)) return std::nullopt;
    Polynomial t = Polynomial::monomial(quotient(lead_r, lead_b), lc_r / lc_b);
    q += t;
    r -= t * b;
  }
  return q;
}

Polynomial divide_exact(const Polynomial& a, const Polynomial& b) {
  auto q = try_divide(a, b);
  if (!q) throw DomainError("inexact polynomial division");
  return *std::move(q);
}

Rational canonical_factor(const Polynomial& p) {
  if (p.is_zero()) return 0;
  Integer den_lcm = 1;
  Integer num_gcd = 0;
  for (const auto& [e, c] : p.terms()) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
  }
  Rational f = make_rational(num_gcd, den_lcm);
  if (sgn(p.leading_term_coefficient()) < 0) f = -f;
  return f;
}

Polynomial canonical(const Polynomial& p) {
  if (p.is_zero()) return p;
  Rational f = canonical_factor(p);
  if (f == 1) return p;
  return p * Rational(1 / f);
}

Polynomial content(const Polynomial& p, std::size_t level) {
  if (p.is_zero()) return p;
  auto coeffs = p.coefficients(level);
  Polynomial g;
  for (const auto& c : coeffs) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? canonical(c) : gcd(g, c);
    if (g.is_constant()) return Polynomial::constant(1);
  }
  return g;
}

Polynomial primitive_part(const Polynomial& p, std::size_t level) {
  if (p.is_zero()) return p;
  Polynomial c = content(p, level);
  if (c.is_constant()) return canonical(p);
  return canonical(divide_exact(p, c));
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return canonical(b);
  if (b.is_zero()) return canonical(a);
  if (a.is_constant() || b.is_constant()) return Polynomial::constant(1);
  std::size_t k = std::max(a.level(), b.level());
  if (a.level() < k) return gcd(a, content(b, k));
  if (b.level() < k) return gcd(content(a, k), b);
  Polynomial ca = content(a, k);
  Polynomial cb = content(b, k);
  Polynomial g = gcd(ca, cb);
  Polynomial x = ca.is_constant() ? canonical(a) : canonical(divide_exact(a, ca));
  Polynomial y = cb.is_constant() ? canonical(b) : canonical(divide_exact(b, cb));
  if (x.degree(k) < y.degree(k)) std::swap(x, y);
  while (true) {
    Polynomial r = pseudo_remainder(x, y, k);
    if (r.is_zero()) break;
    if (r.degree(k) == 0) {
      y = Polynomial::constant(1);
      break;
    }
    x = std::move(y);
    y = primitive_part(r, k);
  }
  return canonical(g * y);
}

Polynomial resultant(const Polynomial& p, const Polynomial& q, std::size_t level) {
  if (p.is_zero() || q.is_zero()) throw DomainError("resultant of the zero polynomial");
  std::uint32_t dp = p.degree(level);
  std::uint32_t dq = q.degree(level);
  if (dp == 0 && dq == 0) return Polynomial::constant(1);
  if (dp == 0) return pow(p, dq);
  if (dq == 0) return pow(q, dp);
  Polynomial a = p;
  Polynomial b = q;
  int s = 1;
  if (dp < dq) {
    std::swap(a, b);
    if ((dp & 1U) && (dq & 1U)) s = -1;
  }
  Polynomial g = Polynomial::constant(1);
  Polynomial h = Polynomial::constant(1);
  while (true) {
    std::uint32_t da = a.degree(level);
    std::uint32_t db = b.degree(level);
    std::uint32_t delta = da - db;
    if ((da & 1U) && (db & 1U)) s = -s;
    Polynomial r = pseudo_remainder(a, b, level);
    a = std::move(b);
    if (r.is_zero()) return Polynomial();
    b = divide_exact(r, g * pow(h, delta));
    g = a.leading_coefficient(level);
    if (delta > 0) h = divide_exact(pow(g, delta), pow(h, delta - 1));
    if (b.degree(level) == 0) break;
  }
  std::uint32_t da = a.degree(level);
  Polynomial result = da == 0 ? Polynomial::constant(1) : divide_exact(pow(b, da), pow(h, da - 1));
  return s < 0 ? -result : result;
}

Polynomial discriminant(const Polynomial& p, std::size_t level) {
  std::uint32_t d = p.degree(level);
  if (d == 0) throw DomainError("discriminant of a polynomial of degree 0");
  Polynomial r = divide_exact(resultant(p, p.derivative(level), level), p.leading_coefficient(level));
  return ((d * (d - 1) / 2) % 2 == 1) ? -r : r;
}

Polynomial square_free_part(const Polynomial& p, std::size_t level) {
  if (p.is_zero()) throw DomainError("square-free part of the zero polynomial");
  if (p.degree(level) == 0) return canonical(p);
  Polynomial g = gcd(p, p.derivative(level));
  Polynomial q = g.is_constant() ? p : divide_exact(p, g);
  return primitive_part(q, level);
}

Polynomial rename_variables(const Polynomial& p, const std::vector<std::size_t>& new_level) {
  Polynomial out;
  for (const auto& [e, c] : p.terms()) {
    Exponents f;
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      std::size_t target = k < new_level.size() ? new_level[k] : k + 1;
      if (f.size() < target) f.resize(target, 0);
      f[target - 1] += e[k];
    }
    out += Polynomial::monomial(std::move(f), c);
  }
  return out;
}

std::vector<Polynomial> projection_factors(const Polynomial& p) {
  std::vector<Polynomial> out;
  if (p.is_constant()) return out;
  std::size_t k = p.level();
  Polynomial c = content(p, k);
  Polynomial pp = c.is_constant() ? p : divide_exact(p, c);
  out.push_back(square_free_part(pp, k));
  if (!c.is_constant()) {
    auto rest = projection_factors(c);
    out.insert(out.end(), rest.begin(), rest.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Infix parser

namespace {

class InfixParser {
 public:
  InfixParser(std::string_view text, VarOrder& vars, bool extend) : text_(text), vars_(vars), extend_(extend) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial p = term();
    while (true) {
      if (accept('+'))
        p += term();
      else if (accept('-'))
        p -= term();
      else
        return p;
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    while (true) {
      if (accept('*')) {
        p *= unary();
      } else if (accept('/')) {
        Polynomial d = unary();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
        p *= Rational(1 / d.constant_value());
      } else {
        return p;
      }
    }
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    Polynomial base = atom();
    if (accept('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = pow(base, static_cast<std::uint32_t>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return base;
  }

  Polynomial atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
        ++pos_;
      return Polynomial::constant(parse_rational(text_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      auto level = vars_.level_of(name);
      if (!level) {
        if (!extend_) fail("unknown variable '" + name + "'");
        level = vars_.add(name);
      }
      return Polynomial::variable(*level);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  VarOrder& vars_;
  bool extend_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text, VarOrder& vars, bool extend) {
  return InfixParser(text, vars, extend).parse();
}

Polynomial Polynomial::parse(std::string_view text) {
  // Default names x1, x2, ... map onto their levels.
  VarOrder vars;
  for (int k = 1; k <= 16; ++k) vars.add("x" + std::to_string(k));
  return InfixParser(text, vars, false).parse();
}

}  // namespace nucad
