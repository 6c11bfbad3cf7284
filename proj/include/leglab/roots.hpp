#pragma once

#include <vector>

#include "leglab/poly.hpp"
#include "leglab/scalar.hpp"

namespace leglab {

// Dense univariate polynomial, coefficient i multiplies x^i. No trailing zeros.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs);

  static UPoly from_multipoly(const MultiPoly& p);

  const std::vector<Rational>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Rational& leading() const { return c_.back(); }

  Rational operator()(const Rational& x) const;
  BigFloat operator()(const BigFloat& x) const;
  int sign_at(const Rational& x) const;

  UPoly derivative() const;
  UPoly primitive() const;  // integer coefficients, content 1, positive leading coefficient

  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

 private:
  void trim();
  std::vector<Rational> c_;
};

// Remainder and gcd over Q.
UPoly remainder(const UPoly& a, const UPoly& b);
UPoly quotient(const UPoly& a, const UPoly& b);
UPoly gcd(UPoly a, UPoly b);

struct IsolatedRoot {
  bool exact = false;
  Rational value;   // the root when exact
  Rational lo, hi;  // isolating interval when not exact (lo < root < hi)
  bool multiple = false;
};

struct RootIsolation {
  std::vector<IsolatedRoot> roots;  // ascending
};

// Real roots of a nonzero univariate polynomial: Sturm-sequence bisection on
// the squarefree part, with rational roots detected exactly. Throws
// std::invalid_argument for the zero polynomial or more than one variable.
RootIsolation isolate_real_roots(const MultiPoly& p);
RootIsolation isolate_real_roots(const UPoly& p);

// Shrinks a non-exact root's interval below `width`.
IsolatedRoot refine(const UPoly& p, IsolatedRoot root, const Rational& width);

// Refines to width 2^-64, then Newton-polishes at the field's precision.
BigFloat polish(const UPoly& p, const IsolatedRoot& root, const ApproxField& field);

// Number of distinct real roots in (a, b].
int count_roots(const UPoly& p, const Rational& a, const Rational& b);

// Simplest (smallest denominator) rational in [a, b].
Rational simplest_rational(const Rational& a, const Rational& b);

}  // namespace leglab
