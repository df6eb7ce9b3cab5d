#include "nucad/rational.hpp"

#include <cctype>

#include "nucad/errors.hpp"

namespace nucad {

ParseError::ParseError(const std::string& msg, int line, int column)
    : Error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + msg : msg),
      line_(line),
      column_(column) {}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw ParseError("empty number");
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  auto slash = text.find('/', pos);
  if (slash != std::string_view::npos) {
    std::string num(text.substr(pos, slash - pos));
    std::string den(text.substr(slash + 1));
    auto digits = [](const std::string& s) {
      if (s.empty()) return false;
      for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
      return true;
    };
    if (!digits(num) || !digits(den)) throw ParseError("malformed fraction '" + std::string(text) + "'");
    Rational r = make_rational(Integer(num, 10), Integer(den, 10));
    return negative ? Rational(-r) : r;
  }
  std::string mantissa;
  long exponent = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      std::string rest(text.substr(pos + 1));
      if (rest.empty()) throw ParseError("malformed exponent in '" + std::string(text) + "'");
      try {
        std::size_t used = 0;
        exponent += std::stol(rest, &used);
        if (used != rest.size()) throw ParseError("malformed exponent in '" + std::string(text) + "'");
      } catch (const std::logic_error&) {
        throw ParseError("malformed exponent in '" + std::string(text) + "'");
      }
      pos = text.size();
      break;
    } else {
      throw ParseError("malformed number '" + std::string(text) + "'");
    }
  }
  if (!seen_digit) throw ParseError("malformed number '" + std::string(text) + "'");
  Integer m(mantissa, 10);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent < 0 ? make_rational(m, scale) : Rational(m * scale);
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& r) { return r.get_str(); }
std::string to_string(const Integer& z) { return z.get_str(); }

int sign(const Rational& r) { return sgn(r); }
int sign(const Integer& z) { return sgn(z); }

Rational abs(const Rational& r) { return sgn(r) < 0 ? Rational(-r) : r; }

Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Integer ceil(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Rational pow(const Rational& base, std::uint32_t exp) {
  Integer n, d;
  mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), exp);
  Rational r(n, d);
  return r;
}

Integer pow(const Integer& base, std::uint32_t exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

double to_double(const Rational& r) { return r.get_d(); }

std::uint32_t bit_bound(const Rational& r) {
  Integer c = ceil(abs(r));
  if (c == 0) return 0;
  std::uint32_t bits = static_cast<std::uint32_t>(mpz_sizeinbase(c.get_mpz_t(), 2));
  return bits;
}

}  // namespace nucad
