#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leglab/errors.hpp"
#include "leglab/linalg.hpp"
#include "leglab/matrix.hpp"

namespace leglab {

// Antisymmetric nondegenerate matrix Omega; omega(v, w) = v^T Omega w.
class SymplecticForm {
 public:
  // Validates antisymmetry, even size and full rank.
  explicit SymplecticForm(QMatrix omega);
  static SymplecticForm standard(std::size_t half_dim);

  const QMatrix& matrix() const { return omega_; }
  std::size_t dim() const { return omega_.rows(); }
  std::size_t half_dim() const { return omega_.rows() / 2; }

 private:
  QMatrix omega_;
};

template <class T>
T omega_eval(const Matrix<T>& omega, std::span<const T> v, std::span<const T> w) {
  if (v.size() != omega.rows() || w.size() != omega.rows()) throw DimensionMismatch("omega_eval: dimension mismatch");
  T acc = zero_like(v[0]);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (is_structural_zero(v[i])) continue;
    for (std::size_t j = 0; j < w.size(); ++j)
      if (!is_structural_zero(omega(i, j)) && !is_structural_zero(w[j])) acc += v[i] * omega(i, j) * w[j];
  }
  return acc;
}

inline Rational omega_eval(const SymplecticForm& f, std::span<const Rational> v, std::span<const Rational> w) {
  return omega_eval(f.matrix(), v, w);
}

// Basis (primitive rows) of {v : omega(v, s) = 0 for all s in span(rows)}.
// Throws PreconditionError if the rows are dependent.
std::vector<QVector> symplectic_perp(const SymplecticForm& f, const std::vector<QVector>& rows);

enum class SubspaceClass { isotropic, coisotropic, lagrangian, symplectic, generic };
std::string to_string(SubspaceClass c);

// Lagrangian is reported ahead of isotropic and coisotropic; the zero
// subspace counts as isotropic and the whole space as coisotropic.
SubspaceClass classify_subspace(const SymplecticForm& f, const std::vector<QVector>& rows);

// Hyperplane a(v) = 0 with center line h = Omega^{-1} a, both stored primitive.
struct Hyperplane {
  QVector a;
  QVector h;
};

Hyperplane make_hyperplane(const SymplecticForm& f, const QVector& a);

// Linear chart of H/h: q maps V to coordinates (rows of size dim V), s embeds
// the quotient back into H (columns), omega_prime = s^T Omega s.
struct QuotientChart {
  Hyperplane hyperplane;
  QMatrix q;            // (d-2) x d
  QMatrix s;            // d x (d-2)
  QMatrix omega_prime;  // (d-2) x (d-2)
};

// With `section` given, its vectors become the columns of s in that order;
// they must lie in H and be independent modulo h.
QuotientChart induced_form(const SymplecticForm& f, const QVector& a,
                           const std::optional<std::vector<QVector>>& section = std::nullopt);

struct CoisotropicSubspace {
  std::vector<QVector> isotropic;  // K, k rows
  std::vector<QVector> basis;      // K^perp, dim V - k rows
};

CoisotropicSubspace random_coisotropic(const SymplecticForm& f, std::size_t k, std::uint64_t seed);

// Random nondegenerate antisymmetric matrix with small integer entries.
SymplecticForm random_symplectic_form(std::size_t half_dim, std::uint64_t seed);

struct FitResult {
  std::size_t ambient = 0;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  std::vector<QMatrix> basis;  // antisymmetric solutions, each primitive
  bool nondegenerate = false;  // some tested element has full rank
  bool degenerate_family() const { return !basis.empty() && !nondegenerate; }
};

// Antisymmetric Omega with u^T Omega v = 0 for every pair inside every frame.
FitResult fit_symplectic_form(const std::vector<std::vector<QVector>>& frames, std::uint64_t seed = 0);

// Matrix with the upper-triangle unknowns filled from `x` (index of (i,j), i<j,
// in row-major order).
QMatrix antisymmetric_from_upper(std::size_t d, std::span<const Rational> x);

}  // namespace leglab
