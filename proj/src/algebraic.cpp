#include "nucad/algebraic.hpp"

#include <sstream>

#include "nucad/errors.hpp"
#include "nucad/realroots.hpp"

namespace nucad {

namespace {

// Stern-Brocot descent for the simplest fraction strictly between two bounds,
// both given as predicates: at_or_below(m) means m <= lo, at_or_above(m) means
// m >= hi. Requires 0 <= lo < hi and n = floor(lo) with n + 1 >= hi.
template <class Below, class Above>
Rational stern_brocot(const Integer& n, Below at_or_below, Above at_or_above) {
  Integer a = n, b = 1, c = n + 1, d = 1;
  auto frac = [](const Integer& p, const Integer& q) { return make_rational(p, q); };
  while (true) {
    Rational m = frac(a + c, b + d);
    if (at_or_below(m)) {
      // largest k with (a + k c)/(b + k d) <= lo
      Integer k = 1;
      while (at_or_below(frac(a + 2 * k * c, b + 2 * k * d))) k *= 2;
      Integer lo_k = k, hi_k = 2 * k;
      while (hi_k - lo_k > 1) {
        Integer mid = (lo_k + hi_k) / 2;
        if (at_or_below(frac(a + mid * c, b + mid * d)))
          lo_k = mid;
        else
          hi_k = mid;
      }
      a += lo_k * c;
      b += lo_k * d;
    } else if (at_or_above(m)) {
      Integer k = 1;
      while (at_or_above(frac(c + 2 * k * a, d + 2 * k * b))) k *= 2;
      Integer lo_k = k, hi_k = 2 * k;
      while (hi_k - lo_k > 1) {
        Integer mid = (lo_k + hi_k) / 2;
        if (at_or_above(frac(c + mid * a, d + mid * b)))
          lo_k = mid;
        else
          hi_k = mid;
      }
      c += lo_k * a;
      d += lo_k * b;
    } else {
      return m;
    }
  }
}

Rational simplest_between(const Rational& lo, const Rational& hi) {
  if (sgn(lo) < 0 && sgn(hi) > 0) return 0;
  if (sgn(hi) <= 0) return -simplest_between(-hi, -lo);
  Integer n = floor(lo);
  if (Rational(n + 1) < hi) return Rational(n + 1);
  return stern_brocot(
      n, [&](const Rational& m) { return m <= lo; }, [&](const Rational& m) { return m >= hi; });
}

UPoly integer_upoly(const UPoly& p) {
  std::vector<Rational> c;
  for (auto& z : p.integer_coeffs()) c.emplace_back(z);
  return UPoly(std::move(c));
}

}  // namespace

AlgebraicNumber AlgebraicNumber::root_of(const UPoly& defining, Rational lo, Rational hi) {
  if (defining.degree() < 1) throw DomainError("defining polynomial must have positive degree");
  if (!(lo < hi)) throw DomainError("isolating interval is empty");
  AlgebraicNumber a;
  a.poly_ = integer_upoly(defining);
  if (a.poly_.degree() == 1) {
    a.value_ = -a.poly_[0] / a.poly_[1];
    return a;
  }
  a.rational_ = false;
  a.lo_ = std::move(lo);
  a.hi_ = std::move(hi);
  a.sign_lo_ = a.poly_.sign_at(a.lo_);
  if (a.sign_lo_ == 0 || a.poly_.sign_at(a.hi_) == 0 || a.sign_lo_ == a.poly_.sign_at(a.hi_))
    throw DomainError("isolating interval endpoints must bracket a simple root");

  // A rational root p/q has q | lc. Two such fractions are at least 1/lc^2
  // apart, so once the interval is that narrow only its simplest fraction can
  // be a root.
  Integer lc = abs(a.poly_.leading()).get_num();
  if (mpz_sizeinbase(lc.get_mpz_t(), 2) <= 64) {
    Rational w = make_rational(1, lc * lc);
    a.refine_below(w);
    if (!a.rational_) {
      Rational r = simplest_between(a.lo_, a.hi_);
      if (a.poly_.sign_at(r) == 0) a.become_rational(r);
    }
  }
  return a;
}

const Rational& AlgebraicNumber::rational() const {
  if (!rational_) throw DomainError("algebraic number is not rational");
  return value_;
}

UPoly AlgebraicNumber::defining() const {
  if (rational_) return UPoly({-value_, Rational(1)});
  return poly_;
}

void AlgebraicNumber::become_rational(const Rational& r) const {
  rational_ = true;
  value_ = r;
}

void AlgebraicNumber::refine() const {
  if (rational_) return;
  Rational m = (lo_ + hi_) / 2;
  int s = poly_.sign_at(m);
  if (s == 0)
    become_rational(m);
  else if (s == sign_lo_)
    lo_ = m;
  else
    hi_ = m;
}

void AlgebraicNumber::refine_below(const Rational& w) const {
  while (!rational_ && hi_ - lo_ >= w) refine();
}

AlgebraicNumber AlgebraicNumber::operator-() const {
  if (rational_) return AlgebraicNumber(Rational(-value_));
  std::vector<Rational> c = poly_.coeffs();
  for (std::size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
  AlgebraicNumber a;
  a.rational_ = false;
  a.poly_ = integer_upoly(UPoly(std::move(c)));
  a.lo_ = -hi_;
  a.hi_ = -lo_;
  a.sign_lo_ = a.poly_.sign_at(a.lo_);
  return a;
}

double AlgebraicNumber::approx() const {
  if (rational_) return value_.get_d();
  refine_below(make_rational(1, Integer(1) << 52) * (abs(lo_) + abs(hi_) + 1));
  return rational_ ? value_.get_d() : Rational((lo_ + hi_) / 2).get_d();
}

std::string AlgebraicNumber::to_string() const {
  if (rational_) return value_.get_str();
  return "algebraic(" + poly_.to_string() + ", (" + lo_.get_str() + ", " + hi_.get_str() + "))";
}

std::string AlgebraicNumber::to_decimal(int digits) const {
  Integer scale = pow(Integer(10), static_cast<std::uint32_t>(digits));
  auto round = [&](const Rational& x) { return floor(Rational(abs(x) * scale + Rational(1, 2))); };
  // refine until both ends round alike, so the text does not depend on earlier refinements
  if (!rational_) refine_below(make_rational(1, scale * 10));
  while (!rational_ && (sgn(lo_) != sgn(hi_) || round(lo_) != round(hi_))) refine();
  Rational v = rational_ ? value_ : lo_;
  Integer scaled = round(v);
  std::string s = scaled.get_str();
  if (digits > 0) {
    if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  if (sgn(v) < 0 && scaled != 0) s.insert(0, "-");
  return s;
}

int compare(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (a.is_rational() && b.is_rational()) return cmp(a.rational(), b.rational());
  if (b.is_rational()) return -compare(b, a);
  if (a.is_rational()) {
    const Rational& r = a.rational();
    if (r <= b.lower()) return -1;
    if (r >= b.upper()) return 1;
    UPoly p = b.defining();
    int s = p.sign_at(r);
    if (s == 0) return 0;
    // b lies below r iff p changes sign on (lower, r)
    return s != p.sign_at(b.lower()) ? 1 : -1;
  }
  for (int round = 0; round < 4; ++round) {
    if (a.is_rational() || b.is_rational()) return compare(a, b);
    if (a.upper() <= b.lower()) return -1;
    if (b.upper() <= a.lower()) return 1;
    if (round < 3) {
      a.refine();
      b.refine();
    }
  }
  UPoly pa = a.defining(), pb = b.defining();
  UPoly g = pa == pb ? pa : gcd(pa, pb);
  if (g.degree() >= 1) {
    Rational lo = std::max(a.lower(), b.lower());
    Rational hi = std::min(a.upper(), b.upper());
    if (g.sign_at(lo) != g.sign_at(hi)) return 0;
  }
  while (true) {
    if (a.is_rational() || b.is_rational()) return compare(a, b);
    if (a.upper() <= b.lower()) return -1;
    if (b.upper() <= a.lower()) return 1;
    a.refine();
    b.refine();
  }
}

Integer floor(const AlgebraicNumber& a) {
  if (a.is_rational()) return floor(a.rational());
  a.refine_below(1);
  Integer f = floor(a.lower());
  while (compare(a, AlgebraicNumber(Rational(f + 1))) >= 0) ++f;
  return f;
}

std::string to_string(const SamplePoint& s) {
  std::ostringstream out;
  out << "(";
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k > 0) out << ", ";
    out << s[k].to_string();
  }
  out << ")";
  return out.str();
}

Rational pick_rational(const std::optional<AlgebraicNumber>& lo, const std::optional<AlgebraicNumber>& hi) {
  if (lo && hi && compare(*lo, *hi) >= 0) throw DomainError("pick_rational on an empty interval");
  if (lo && lo->is_rational() && hi && hi->is_rational()) return simplest_between(lo->rational(), hi->rational());
  auto above_lo = [&](const Rational& r) { return !lo || compare(AlgebraicNumber(r), *lo) > 0; };
  auto below_hi = [&](const Rational& r) { return !hi || compare(AlgebraicNumber(r), *hi) < 0; };
  if (above_lo(0) && below_hi(0)) return 0;
  if (lo && compare(*lo, AlgebraicNumber(0L)) >= 0) {
    Integer n = floor(*lo);
    if (below_hi(Rational(n + 1))) return Rational(n + 1);
    return stern_brocot(
        n, [&](const Rational& m) { return !above_lo(m); }, [&](const Rational& m) { return !below_hi(m); });
  }
  // interval lies at or below 0: mirror
  std::optional<AlgebraicNumber> mlo, mhi;
  if (hi) mlo = -*hi;
  if (lo) mhi = -*lo;
  return -pick_rational(mlo, mhi);
}

}  // namespace nucad
