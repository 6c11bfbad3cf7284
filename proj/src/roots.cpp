#include "leglab/roots.hpp"

#include <algorithm>
#include <stdexcept>

namespace leglab {

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

UPoly UPoly::from_multipoly(const MultiPoly& p) {
  int active = -1;
  for (std::size_t i = 0; i < p.vars().size(); ++i) {
    if (p.degree_in(i) <= 0) continue;
    if (active >= 0) throw std::invalid_argument("polynomial is not univariate");
    active = static_cast<int>(i);
  }
  std::vector<Rational> c;
  for (const auto& [e, v] : p.terms()) {
    const std::size_t d = active < 0 ? 0 : e[static_cast<std::size_t>(active)];
    if (c.size() <= d) c.resize(d + 1);
    c[d] += v;
  }
  return UPoly(std::move(c));
}

Rational UPoly::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

BigFloat UPoly::operator()(const BigFloat& x) const {
  BigFloat acc(x.precision());
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= x;
    acc += BigFloat(*it, x.precision());
  }
  return acc;
}

int UPoly::sign_at(const Rational& x) const { return sgn((*this)(x)); }

UPoly UPoly::derivative() const {
  std::vector<Rational> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<unsigned long>(i));
  return UPoly(std::move(d));
}

UPoly UPoly::primitive() const {
  if (c_.empty()) return *this;
  auto v = leglab::primitive(c_);
  if (sgn(v.back()) < 0)
    for (auto& x : v) x = -x;
  return UPoly(std::move(v));
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return UPoly(std::move(c));
}

namespace {

void divide(const UPoly& a, const UPoly& b, std::vector<Rational>& q, std::vector<Rational>& r) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  r = a.coeffs();
  const auto& bc = b.coeffs();
  const int db = b.degree();
  q.assign(a.degree() >= db ? static_cast<std::size_t>(a.degree() - db + 1) : 0, Rational(0));
  for (int d = a.degree(); d >= db; --d) {
    const Rational f = r[static_cast<std::size_t>(d)] / bc.back();
    if (sgn(f) == 0) continue;
    q[static_cast<std::size_t>(d - db)] = f;
    for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(d - db + i)] -= f * bc[static_cast<std::size_t>(i)];
  }
}

}  // namespace

UPoly remainder(const UPoly& a, const UPoly& b) {
  std::vector<Rational> q, r;
  divide(a, b, q, r);
  return UPoly(std::move(r));
}

UPoly quotient(const UPoly& a, const UPoly& b) {
  std::vector<Rational> q, r;
  divide(a, b, q, r);
  return UPoly(std::move(q));
}

UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = remainder(a, b).primitive();
    a = std::move(b);
    b = std::move(r);
  }
  return a.primitive();
}

namespace {

std::vector<UPoly> sturm_sequence(const UPoly& p) {
  std::vector<UPoly> s{p, p.derivative()};
  while (!s.back().is_zero()) {
    UPoly r = remainder(s[s.size() - 2], s.back());
    if (r.is_zero()) break;
    // Positive rescaling keeps the sign pattern and the coefficients small.
    UPoly prim = r.primitive();
    if (sgn(r.leading()) > 0) prim = UPoly() - prim;
    s.push_back(std::move(prim));
  }
  if (s.back().is_zero()) s.pop_back();
  return s;
}

int sign_changes(const std::vector<UPoly>& seq, const Rational& x) {
  int changes = 0, last = 0;
  for (const auto& p : seq) {
    const int sg = p.sign_at(x);
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++changes;
    last = sg;
  }
  return changes;
}

Rational cauchy_bound(const UPoly& p) {
  Rational m = 0;
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, Rational(abs(p.coeffs()[static_cast<std::size_t>(i)] / p.leading())));
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), m.get_num_mpz_t(), m.get_den_mpz_t());
  return Rational(c + 1);
}

Rational floor_q(const Rational& x) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return Rational(f);
}

Rational ceil_q(const Rational& x) {
  Integer f;
  mpz_cdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return Rational(f);
}

struct Squarefree {
  UPoly sqf;
  UPoly repeated;  // gcd(p, p'); roots are the multiple roots of p
  std::vector<UPoly> sturm;
};

Squarefree squarefree(const UPoly& p) {
  Squarefree s;
  s.repeated = gcd(p, p.derivative());
  s.sqf = quotient(p, s.repeated).primitive();
  s.sturm = sturm_sequence(s.sqf);
  return s;
}

int count_in(const std::vector<UPoly>& sturm, const Rational& a, const Rational& b) {
  return sign_changes(sturm, a) - sign_changes(sturm, b);
}

// Bisect until the root in (lo, hi] is below `width` and lo is not a root.
void shrink(const Squarefree& s, Rational& lo, Rational& hi, const Rational& width) {
  while (hi - lo >= width || s.sqf.sign_at(lo) == 0) {
    const Rational mid = (lo + hi) / 2;
    if (count_in(s.sturm, lo, mid) > 0)
      hi = mid;
    else
      lo = mid;
  }
}

}  // namespace

Rational simplest_rational(const Rational& a, const Rational& b) {
  if (a > b) return simplest_rational(b, a);
  if (sgn(a) <= 0 && sgn(b) >= 0) return 0;
  if (sgn(b) < 0) return -simplest_rational(-b, -a);
  const Rational c = ceil_q(a);
  if (c <= b) return c;
  const Rational f = floor_q(a);
  return f + 1 / simplest_rational(1 / (b - f), 1 / (a - f));
}

int count_roots(const UPoly& p, const Rational& a, const Rational& b) {
  if (p.is_zero()) throw std::invalid_argument("count_roots: zero polynomial");
  return count_in(squarefree(p).sturm, a, b);
}

RootIsolation isolate_real_roots(const MultiPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("isolate_real_roots: zero polynomial");
  return isolate_real_roots(UPoly::from_multipoly(p));
}

RootIsolation isolate_real_roots(const UPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("isolate_real_roots: zero polynomial");
  RootIsolation out;
  if (p.degree() == 0) return out;
  const Squarefree s = squarefree(p);
  const UPoly dp = p.derivative();
  const Rational bound = cauchy_bound(s.sqf);
  // A rational root p/q of the primitive integer form has q | lc, so any
  // interval narrower than 1/lc^2 holds at most one such candidate.
  const Rational lc = abs(s.sqf.leading());
  const Rational detect_width = 1 / (lc * lc * 2);

  std::vector<std::pair<Rational, Rational>> stack{{-bound, bound}};
  std::vector<std::pair<Rational, Rational>> isolated;
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    const int n = count_in(s.sturm, a, b);
    if (n == 0) continue;
    if (n == 1) {
      isolated.emplace_back(a, b);
      continue;
    }
    const Rational mid = (a + b) / 2;
    stack.emplace_back(mid, b);
    stack.emplace_back(a, mid);
  }
  std::sort(isolated.begin(), isolated.end());
  for (auto [a, b] : isolated) {
    IsolatedRoot r;
    if (s.sqf.sign_at(b) == 0) {
      r.exact = true;
      r.value = b;
    } else {
      shrink(s, a, b, detect_width);
      const Rational cand = simplest_rational(a, b);
      if (s.sqf.sign_at(cand) == 0) {
        r.exact = true;
        r.value = cand;
      } else {
        r.lo = a;
        r.hi = b;
      }
    }
    if (r.exact)
      r.multiple = dp.sign_at(r.value) == 0;
    else
      r.multiple = s.repeated.degree() > 0 && count_in(sturm_sequence(s.repeated), r.lo, r.hi) > 0;
    out.roots.push_back(std::move(r));
  }
  return out;
}

IsolatedRoot refine(const UPoly& p, IsolatedRoot root, const Rational& width) {
  if (root.exact) return root;
  const Squarefree s = squarefree(p);
  shrink(s, root.lo, root.hi, width);
  return root;
}

BigFloat polish(const UPoly& p, const IsolatedRoot& root, const ApproxField& field) {
  if (root.exact) return field.from(root.value);
  const Squarefree s = squarefree(p);
  IsolatedRoot r = root;
  Rational width(1);
  mpq_div_2exp(width.get_mpq_t(), width.get_mpq_t(), 64);
  shrink(s, r.lo, r.hi, width);
  const UPoly ds = s.sqf.derivative();
  BigFloat lo = field.from(r.lo), hi = field.from(r.hi);
  BigFloat x = (lo + hi) / field.from(2);
  const BigFloat stop = BigFloat::pow2(-static_cast<long>(field.precision) + 4, field.precision);
  for (int it = 0; it < 200; ++it) {
    const BigFloat fx = s.sqf(x);
    if (fx.sign() == 0) break;
    const BigFloat step = fx / ds(x);
    BigFloat next = x - step;
    if (next < lo || next > hi) next = (lo + hi) / field.from(2);
    // Keep a bracketing interval for the bisection fallback.
    if ((s.sqf(lo).sign() < 0) == (fx.sign() < 0))
      lo = x;
    else
      hi = x;
    const BigFloat scale = abs(x) > field.one() ? abs(x) : field.one();
    const bool done = abs(next - x) <= stop * scale;
    x = std::move(next);
    if (done) break;
  }
  return x;
}

}  // namespace leglab
