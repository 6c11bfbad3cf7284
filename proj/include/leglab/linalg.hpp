#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "leglab/matrix.hpp"
#include "leglab/scalar.hpp"

namespace leglab {

using IntRows = std::vector<std::vector<Integer>>;

// Row echelon form produced by fraction-free elimination. Every stored entry
// is an integer minor of the input, so no division ever leaves the integers.
struct BareissEchelon {
  IntRows rows;                         // first `pivot_cols.size()` rows are the echelon rows
  std::vector<std::size_t> pivot_cols;  // strictly increasing
  Integer last_pivot = 1;               // determinant when the input is square and nonsingular (up to sign)
  int swap_parity = 0;
};

// Scales every row by the lcm of its denominators. Row spaces are unchanged.
IntRows clear_denominators(const QMatrix& m);

// With check_divisibility set, each exact division is verified and a
// std::logic_error is thrown if a remainder appears.
BareissEchelon bareiss_echelon(IntRows m, bool check_divisibility = false);

std::size_t rank(const QMatrix& m);
std::size_t rank(const RMatrix& m, const ApproxField& field);

// Right null space. Exact basis vectors are primitive integer vectors with the
// first nonzero entry positive; approx vectors are scaled to unit max-norm.
std::vector<QVector> kernel_basis(const QMatrix& m);
std::vector<RVector> kernel_basis(const RMatrix& m, const ApproxField& field);

// Same contract as kernel_basis(QMatrix), computed modulo word-size primes with
// rational reconstruction. The result is certified by exact substitution into
// every row; if certification keeps failing it falls back to kernel_basis.
std::vector<QVector> kernel_basis_modular(const QMatrix& m);

Rational determinant(const QMatrix& m);
QMatrix inverse(const QMatrix& m);

enum class SolveKind { none, unique, family, inconclusive };

template <class T>
struct SolveResult {
  SolveKind kind = SolveKind::none;
  std::vector<T> particular;
  std::vector<std::vector<T>> kernel;
};

SolveResult<Rational> solve_linear(const QMatrix& a, std::span<const Rational> b);
SolveResult<BigFloat> solve_linear(const RMatrix& a, std::span<const BigFloat> b, const ApproxField& field);

// Vectors as matrix rows.
QMatrix stack_rows(const std::vector<QVector>& rows, std::size_t width);
RMatrix stack_rows(const std::vector<RVector>& rows, std::size_t width);

BigFloat max_abs(std::span<const BigFloat> v);

}  // namespace leglab
