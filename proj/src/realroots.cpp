#include "nucad/realroots.hpp"

#include <algorithm>
#include <chrono>

#include "nucad/errors.hpp"

namespace nucad {

namespace {

thread_local double g_root_seconds = 0;
thread_local int g_root_depth = 0;

class RootTimer {
 public:
  RootTimer() : outer_(g_root_depth++ == 0) {
    if (outer_) start_ = std::chrono::steady_clock::now();
  }
  ~RootTimer() {
    --g_root_depth;
    if (outer_) g_root_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  RootTimer(const RootTimer&) = delete;
  RootTimer& operator=(const RootTimer&) = delete;

 private:
  bool outer_;
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------
// Descartes bisection on integer polynomials

using IPoly = std::vector<Integer>;

void taylor_shift_one(IPoly& a) {
  std::size_t n = a.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j-- > i;) a[j] += a[j + 1];
}

// Sign variations of (x+1)^n q(1/(x+1)); bounds the number of roots of q in (0, 1).
int descartes_01(const IPoly& q) {
  IPoly r(q.rbegin(), q.rend());
  taylor_shift_one(r);
  int vars = 0, last = 0;
  for (const auto& c : r) {
    int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last && ++vars > 1) return vars;
    last = s;
  }
  return vars;
}

struct RawRoot {
  Rational lo, hi;
  bool exact;
};

// Roots in (0, 2^e) of a with a(0) != 0.
void vca(IPoly q, const Integer& c, unsigned k, unsigned e, std::vector<RawRoot>& out) {
  int v = descartes_01(q);
  if (v == 0) return;
  Integer denom = Integer(1) << k;
  Integer scale = Integer(1) << e;
  if (v == 1) {
    out.push_back({make_rational(c * scale, denom), make_rational((c + 1) * scale, denom), false});
    return;
  }
  std::size_t n = q.size() - 1;
  IPoly left = q;
  for (std::size_t i = 0; i <= n; ++i) left[i] <<= static_cast<mp_bitcnt_t>(n - i);
  IPoly right = left;
  taylor_shift_one(right);
  bool mid_root = sgn(right[0]) == 0;
  if (mid_root) {
    // the midpoint is a root: remove it from both halves so that no child
    // interval has a root at an endpoint
    right.erase(right.begin());
    IPoly quot(n);
    quot[n - 1] = left[n];
    for (std::size_t j = n - 1; j-- > 0;) quot[j] = left[j + 1] + quot[j + 1];
    left = std::move(quot);
  }
  vca(std::move(left), 2 * c, k + 1, e, out);
  if (mid_root) out.push_back({make_rational((2 * c + 1) * scale, denom * 2), Rational(0), true});
  vca(std::move(right), 2 * c + 1, k + 1, e, out);
}

std::vector<RawRoot> positive_roots(const IPoly& a) {
  std::vector<RawRoot> out;
  if (a.size() <= 1) return out;
  std::vector<Rational> rc(a.begin(), a.end());
  Rational bound = root_upper_bound(UPoly(rc));
  unsigned e = bit_bound(bound);
  IPoly q = a;
  for (std::size_t i = 0; i < q.size(); ++i) q[i] <<= static_cast<mp_bitcnt_t>(e * i);
  vca(std::move(q), 0, 0, e, out);
  return out;
}

AlgebraicNumber make_root(const UPoly& sqf, const RawRoot& r) {
  if (r.exact) return AlgebraicNumber(r.lo);
  return AlgebraicNumber::root_of(sqf, r.lo, r.hi);
}

// ---------------------------------------------------------------------------
// Interval arithmetic over Q

struct Box {
  Rational lo, hi;
};

Box operator+(const Box& a, const Box& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Box operator*(const Box& a, const Box& b) {
  Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

Box ipow(const Box& a, std::uint32_t k) {
  if (k == 0) return {1, 1};
  Rational l = pow(a.lo, k), h = pow(a.hi, k);
  if (k % 2 == 1) return {l, h};
  if (sgn(a.lo) >= 0) return {l, h};
  if (sgn(a.hi) <= 0) return {h, l};
  return {0, std::max(l, h)};
}

Box enclosure(const AlgebraicNumber& a) { return {a.lower(), a.upper()}; }

// Enclosure of q(s); every variable of q must be assigned by s.
Box eval_box(const Polynomial& q, const SamplePoint& s) {
  Box acc{0, 0};
  for (const auto& [e, c] : q.terms()) {
    Box t{c, c};
    for (std::size_t k = 0; k < e.size(); ++k)
      if (e[k] > 0) t = t * ipow(enclosure(s[k]), e[k]);
    acc = acc + t;
  }
  return acc;
}

Box eval_box(const UPoly& u, const AlgebraicNumber& a) {
  Box x = enclosure(a);
  Box acc{0, 0};
  for (std::size_t k = u.coeffs().size(); k-- > 0;) {
    acc = acc * x;
    acc = acc + Box{u[k], u[k]};
  }
  return acc;
}

int box_sign(const Box& b) {
  if (sgn(b.lo) > 0) return 1;
  if (sgn(b.hi) < 0) return -1;
  return 0;  // inconclusive (or exactly zero when lo = hi = 0)
}

bool box_decided(const Box& b) { return sgn(b.lo) > 0 || sgn(b.hi) < 0 || (sgn(b.lo) == 0 && sgn(b.hi) == 0); }

void refine_all(const std::vector<std::size_t>& levels, const SamplePoint& s) {
  for (std::size_t k : levels) s[k - 1].refine();
}

// G(y) with G(q(s)) = 0 for y at level n+1, where algebraic coordinates listed
// in `levels` are eliminated by resultants with their defining polynomials.
UPoly value_polynomial(const Polynomial& q, const std::vector<std::size_t>& levels, const SamplePoint& s,
                       std::size_t y_level) {
  Polynomial f = Polynomial::variable(y_level) - q;
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    std::size_t k = *it;
    if (f.degree(k) == 0) continue;
    f = resultant(f, s[k - 1].defining().to_polynomial(k), k);
  }
  return UPoly::from_polynomial(f, y_level);
}

std::vector<std::size_t> algebraic_levels(const Polynomial& q) { return q.variables(); }

int sign_univariate(const UPoly& u, const AlgebraicNumber& a) {
  if (a.is_rational()) return u.sign_at(a.rational());
  UPoly def = a.defining();
  UPoly g = gcd(u, def);
  if (g.degree() >= 1 && g.sign_at(a.lower()) != g.sign_at(a.upper())) return 0;
  while (true) {
    if (a.is_rational()) return u.sign_at(a.rational());
    Box b = eval_box(u, a);
    if (box_decided(b)) return box_sign(b);
    a.refine();
  }
}

int sign_multivariate(const Polynomial& q, const SamplePoint& s) {
  std::vector<std::size_t> levels = algebraic_levels(q);
  for (int round = 0; round < 8; ++round) {
    Box b = eval_box(q, s);
    if (box_decided(b)) return box_sign(b);
    refine_all(levels, s);
  }
  UPoly g = value_polynomial(q, levels, s, q.level() + 1);
  if (g.is_zero()) throw Error("internal: vanishing value polynomial");
  if (sgn(g[0]) != 0) {
    while (true) {
      Box b = eval_box(q, s);
      if (box_sign(b) != 0) return box_sign(b);
      refine_all(levels, s);
    }
  }
  std::size_t m = 0;
  while (sgn(g[m]) == 0) ++m;
  std::vector<Rational> rest(g.coeffs().begin() + static_cast<std::ptrdiff_t>(m), g.coeffs().end());
  UPoly gp(std::move(rest));
  if (gp.degree() == 0) return 0;
  Rational bound = root_lower_bound(gp);
  while (true) {
    Box b = eval_box(q, s);
    if (box_sign(b) != 0) return box_sign(b);
    if (b.lo > -bound && b.hi < bound) return 0;
    refine_all(levels, s);
  }
}

}  // namespace

double real_root_seconds() { return g_root_seconds; }

RootList isolate_roots(const UPoly& p) {
  RootTimer timer;
  if (p.is_zero()) throw DomainError("isolate_roots of the zero polynomial");
  RootList out;
  if (p.degree() <= 0) return out;
  UPoly sqf = square_free(p);
  IPoly a = sqf.integer_coeffs();
  bool zero_root = sgn(a[0]) == 0;
  if (zero_root) {
    a.erase(a.begin());
    sqf = UPoly(std::vector<Rational>(a.begin(), a.end()));
  }
  IPoly neg = a;
  for (std::size_t k = 1; k < neg.size(); k += 2) neg[k] = -neg[k];
  std::vector<RawRoot> pos = positive_roots(a);
  std::vector<RawRoot> negs = positive_roots(neg);
  // exact roots found at bisection points may be endpoints of neighbouring
  // intervals; divide them out of the defining polynomial
  for (const auto& r : pos)
    if (r.exact) sqf = divmod(sqf, UPoly({-r.lo, Rational(1)})).first;
  for (const auto& r : negs)
    if (r.exact) sqf = divmod(sqf, UPoly({r.lo, Rational(1)})).first;
  for (auto it = negs.rbegin(); it != negs.rend(); ++it) {
    RawRoot r = *it;
    if (r.exact)
      r.lo = -r.lo;
    else
      r = {-it->hi, -it->lo, false};
    out.push_back(make_root(sqf, r));
  }
  if (zero_root) out.emplace_back(Rational(0));
  for (const auto& r : pos) out.push_back(make_root(sqf, r));
  return out;
}

RootList isolate_roots(const Polynomial& p) {
  auto vars = p.variables();
  if (vars.size() > 1) throw DomainError("isolate_roots needs a univariate polynomial");
  if (vars.empty()) {
    if (p.is_zero()) throw DomainError("isolate_roots of the zero polynomial");
    return {};
  }
  return isolate_roots(UPoly::from_polynomial(p, vars[0]));
}

Polynomial substitute_rationals(const Polynomial& p, const SamplePoint& s) {
  Polynomial q = p;
  for (std::size_t k : p.variables()) {
    if (k > s.size()) break;
    if (s[k - 1].is_rational()) q = q.substitute(k, s[k - 1].rational());
  }
  return q;
}

int sign_at(const Polynomial& p, const SamplePoint& s) {
  if (p.level() > s.size()) throw DomainError("sign_at: sample does not assign every variable");
  RootTimer timer;
  Polynomial q = substitute_rationals(p, s);
  // substitution may turn more coordinates rational while refining, so loop
  while (true) {
    if (q.is_constant()) return sgn(q.constant_value());
    auto vars = q.variables();
    bool changed = false;
    for (std::size_t k : vars)
      if (s[k - 1].is_rational()) changed = true;
    if (changed) {
      q = substitute_rationals(q, s);
      continue;
    }
    if (vars.size() == 1) return sign_univariate(UPoly::from_polynomial(q, vars[0]), s[vars[0] - 1]);
    return sign_multivariate(q, s);
  }
}

AlgebraicNumber evaluate_at(const Polynomial& p, const SamplePoint& s) {
  if (p.level() > s.size()) throw DomainError("evaluate_at: sample does not assign every variable");
  RootTimer timer;
  Polynomial q = substitute_rationals(p, s);
  if (q.is_constant()) return AlgebraicNumber(q.constant_value());
  std::vector<std::size_t> levels = q.variables();
  UPoly g = value_polynomial(q, levels, s, q.level() + 1);
  RootList roots = isolate_roots(g);
  while (true) {
    Box b = eval_box(q, s);
    std::vector<std::size_t> hits;
    for (std::size_t k = 0; k < roots.size(); ++k) {
      const auto& r = roots[k];
      bool overlap = r.is_rational() ? (b.lo <= r.rational() && r.rational() <= b.hi)
                                     : (b.lo < r.upper() && r.lower() < b.hi);
      if (overlap) hits.push_back(k);
    }
    if (hits.size() == 1) return roots[hits[0]];
    if (hits.empty()) throw Error("internal: value enclosure misses every root");
    for (std::size_t k : hits) roots[k].refine();
    refine_all(levels, s);
  }
}

PartialValue eval_partial(const Polynomial& p, const SamplePoint& s) {
  PartialValue out;
  out.residual = substitute_rationals(p, s);
  if (p.level() <= s.size()) out.value = evaluate_at(p, s);
  return out;
}

RootsAtSample roots_at_sample(const Polynomial& p, const SamplePoint& s) {
  std::size_t i = p.level();
  if (i == 0) throw DomainError("roots_at_sample needs a non-constant polynomial");
  if (s.size() + 1 < i) throw DomainError("roots_at_sample: sample too short");
  RootTimer timer;
  SamplePoint base(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(i - 1));
  RootsAtSample out;
  bool all_zero = true;
  for (const auto& c : p.coefficients(i)) {
    if (!c.is_zero() && sign_at(c, base) != 0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) {
    out.nullified = true;
    return out;
  }
  Polynomial q = substitute_rationals(p, base);
  std::vector<std::size_t> alg;
  for (std::size_t k : q.variables())
    if (k != i) alg.push_back(k);
  if (alg.empty()) {
    out.roots = isolate_roots(UPoly::from_polynomial(q, i));
    return out;
  }
  Polynomial norm = q;
  for (auto it = alg.rbegin(); it != alg.rend(); ++it) {
    if (norm.degree(*it) == 0) continue;
    norm = resultant(norm, base[*it - 1].defining().to_polynomial(*it), *it);
    if (norm.is_zero()) break;
  }
  if (norm.is_zero()) {
    // Some conjugate nullifies q. Track the value as Y - q, strip the power of
    // Y that the vanishing conjugates contribute, then set Y = 0.
    std::size_t y = i + 1;
    Polynomial f = Polynomial::variable(y) - q;
    for (auto it = alg.rbegin(); it != alg.rend(); ++it) {
      if (f.degree(*it) == 0) continue;
      f = resultant(f, base[*it - 1].defining().to_polynomial(*it), *it);
    }
    std::uint32_t m = f.degree(y);
    for (const auto& [e, c] : f.terms()) m = std::min(m, e.size() >= y ? e[y - 1] : 0U);
    norm = f.coefficient(y, m);
  }
  RootList candidates = isolate_roots(UPoly::from_polynomial(norm, i));
  SamplePoint ext = base;
  ext.emplace_back();
  for (auto& xi : candidates) {
    ext.back() = xi;
    if (sign_at(q, ext) == 0) out.roots.push_back(ext.back());
  }
  return out;
}

}  // namespace nucad
