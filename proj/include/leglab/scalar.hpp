#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace leglab {

using Rational = mpq_class;
using Integer = mpz_class;

enum class Backend { exact, approx };

std::string to_string(Backend b);
Backend backend_from_string(const std::string& s);

// Arbitrary-precision binary float. Arithmetic results carry the larger of
// the operand precisions.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 128);
  BigFloat(long v, mpfr_prec_t prec);
  BigFloat(const Rational& q, mpfr_prec_t prec);
  BigFloat(const BigFloat& o);
  BigFloat(BigFloat&& o) noexcept;
  BigFloat& operator=(const BigFloat& o);
  BigFloat& operator=(BigFloat&& o) noexcept;
  ~BigFloat();

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  BigFloat& operator+=(const BigFloat& o);
  BigFloat& operator-=(const BigFloat& o);
  BigFloat& operator*=(const BigFloat& o);
  BigFloat& operator/=(const BigFloat& o);
  BigFloat operator-() const;

  friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
  friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
  friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
  friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }

  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return b < a; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return !(b < a); }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return !(a < b); }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // Base-2 exponent e with 2^(e-1) <= |x| < 2^e; very negative for zero.
  long exponent2() const;
  // Scientific notation with the given number of significant decimal digits.
  std::string to_string(int digits = 20) const;

  static BigFloat pow2(long e, mpfr_prec_t prec);

 private:
  mpfr_t v_;
};

BigFloat abs(const BigFloat& x);
BigFloat sqrt(const BigFloat& x);

// Field context for the exact backend.
struct ExactField {
  using value_type = Rational;
  Rational from(const Rational& q) const { return q; }
  Rational zero() const { return Rational(0); }
  Rational one() const { return Rational(1); }
  bool is_zero(const Rational& x) const { return sgn(x) == 0; }
};

// Field context for the approximate backend: working precision p bits and
// zero tolerance tau (default 2^(-p/2)).
struct ApproxField {
  using value_type = BigFloat;
  mpfr_prec_t precision = 128;
  BigFloat tolerance;

  explicit ApproxField(mpfr_prec_t prec = 128);
  ApproxField(mpfr_prec_t prec, const BigFloat& tol);

  BigFloat from(const Rational& q) const { return BigFloat(q, precision); }
  BigFloat zero() const { return BigFloat(precision); }
  BigFloat one() const { return BigFloat(1L, precision); }
  bool is_zero(const BigFloat& x) const { return abs(x) < tolerance; }
};

inline bool is_structural_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_structural_zero(const BigFloat& x) { return x.sign() == 0; }
inline Rational zero_like(const Rational&) { return Rational(0); }
inline BigFloat zero_like(const BigFloat& x) { return BigFloat(x.precision()); }

// Vectors of rationals: content removal and sign normalization.
std::vector<Rational> primitive(std::span<const Rational> v);
bool is_zero_vector(std::span<const Rational> v);
std::string rational_string(const Rational& q);
Rational parse_rational(const std::string& s);

}  // namespace leglab
