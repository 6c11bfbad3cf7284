#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "leglab/errors.hpp"
#include "leglab/linalg.hpp"
#include "leglab/poly.hpp"

namespace leglab {

// Affine cone tangent data at one point: vectors[0] is the point itself,
// followed by its parameter partials.
template <class T>
struct Frame {
  std::vector<T> params;
  std::vector<std::vector<T>> vectors;
  const std::vector<T>& point() const { return vectors.front(); }
};

using TangentFrame = Frame<Rational>;
using ApproxFrame = Frame<BigFloat>;

inline bool all_zero(const QVector& v, const ExactField&) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

inline bool all_zero(const RVector& v, const ApproxField& f) {
  for (const auto& x : v)
    if (!f.is_zero(x)) return false;
  return true;
}

// Cone map (lambda, t) -> lambda * p(t) for coordinate polynomials p.
class ParamVariety {
 public:
  // Fiber-linear parameters are validated when declared; when none are
  // declared, every parameter of degree <= 1 in all coordinates is recorded.
  ParamVariety(std::string name, std::vector<std::string> params, std::vector<MultiPoly> coords,
               std::vector<std::string> fiber_linear = {});

  const std::string& name() const { return name_; }
  const std::vector<std::string>& params() const { return params_; }
  const std::vector<MultiPoly>& coords() const { return coords_; }
  std::size_t ambient() const { return coords_.size(); }
  std::size_t param_count() const { return params_.size(); }
  const std::vector<std::size_t>& fiber_linear() const { return fiber_; }
  bool declared_fiber() const { return declared_fiber_; }
  // No coordinate term has degree > 1 in the given parameters jointly.
  bool jointly_linear(const std::vector<std::size_t>& idx) const;

  template <class Field>
  std::vector<typename Field::value_type> point(std::span<const typename Field::value_type> t, const Field& f) const {
    check_arity(t.size());
    std::vector<typename Field::value_type> out;
    out.reserve(coords_.size());
    for (const auto& c : coords_) out.push_back(evaluate(c, t, f));
    return out;
  }

  // Throws PreconditionError at a base point p(t) = 0.
  template <class Field>
  Frame<typename Field::value_type> frame(std::span<const typename Field::value_type> t, const Field& f) const {
    Frame<typename Field::value_type> fr;
    fr.params.assign(t.begin(), t.end());
    fr.vectors.push_back(point(t, f));
    if (all_zero(fr.vectors[0], f)) throw PreconditionError("base point: p(t) = 0");
    for (const auto& row : partials_) {
      std::vector<typename Field::value_type> v;
      v.reserve(row.size());
      for (const auto& c : row) v.push_back(evaluate(c, t, f));
      fr.vectors.push_back(std::move(v));
    }
    return fr;
  }

 private:
  void check_arity(std::size_t n) const {
    if (n != params_.size()) throw DimensionMismatch("parameter assignment has the wrong length");
  }

  std::string name_;
  std::vector<std::string> params_;
  std::vector<MultiPoly> coords_;
  std::vector<std::vector<MultiPoly>> partials_;  // [param][coord]
  std::vector<std::size_t> fiber_;
  bool declared_fiber_ = false;
};

TangentFrame cone_tangent_frame(const ParamVariety& x, std::span<const Rational> t);

template <class T>
Matrix<T> frame_matrix(const Frame<T>& fr) {
  return Matrix<T>::from_rows(fr.vectors);
}

std::size_t jacobian_rank_at(const ParamVariety& x, std::span<const Rational> t);

// Majority rank over 20 seeded draws.
std::size_t generic_rank(const ParamVariety& x, std::uint64_t seed, std::int64_t height_bound = 100);

// Distinct parameter points of height <= height_bound off the base locus and
// at the generic rank. Throws BudgetExhausted after bounded retries.
std::vector<std::vector<Rational>> sample_points(const ParamVariety& x, std::size_t count, std::uint64_t seed,
                                                 std::int64_t height_bound = 100);

struct DimensionEstimate {
  int dimension = -1;  // max rank - 1
  std::map<std::size_t, std::size_t> rank_histogram;
  std::size_t evaluated = 0;
  bool inconclusive = false;
};

DimensionEstimate dimension_estimate(const ParamVariety& x, std::size_t nsamples, std::uint64_t seed);

// Zero set of a homogeneous F on W, with precomputed gradient and Hessian.
class ImplicitHypersurface {
 public:
  ImplicitHypersurface(std::string name, MultiPoly f);

  const std::string& name() const { return name_; }
  const MultiPoly& equation() const { return f_; }
  const std::vector<std::string>& vars() const { return f_.vars(); }
  std::size_t ambient() const { return f_.vars().size(); }
  int degree() const { return f_.total_degree(); }

  template <class Field>
  typename Field::value_type value(std::span<const typename Field::value_type> w, const Field& f) const {
    return evaluate(f_, w, f);
  }
  template <class Field>
  std::vector<typename Field::value_type> gradient(std::span<const typename Field::value_type> w, const Field& f) const {
    std::vector<typename Field::value_type> g;
    for (const auto& p : grad_) g.push_back(evaluate(p, w, f));
    return g;
  }
  template <class Field>
  Matrix<typename Field::value_type> hessian(std::span<const typename Field::value_type> w, const Field& f) const {
    Matrix<typename Field::value_type> h(ambient(), ambient(), f.zero());
    for (std::size_t i = 0; i < ambient(); ++i)
      for (std::size_t j = 0; j < ambient(); ++j) h(i, j) = evaluate(hess_[i][j], w, f);
    return h;
  }

 private:
  std::string name_;
  MultiPoly f_;
  std::vector<MultiPoly> grad_;
  std::vector<std::vector<MultiPoly>> hess_;
};

// alpha = grad F(w). Throws PreconditionError if F(w) != 0 or w is singular.
QVector conormal_covector(const ImplicitHypersurface& z, std::span<const Rational> w);
RVector conormal_covector(const ImplicitHypersurface& z, std::span<const BigFloat> w, const ApproxField& f);

// Rational points: lines along coordinate axes in which F is linear, then
// random lines with rational roots. Singular and repeated points are skipped.
std::vector<QVector> hypersurface_points_exact(const ImplicitHypersurface& z, std::size_t count, std::uint64_t seed,
                                               std::size_t budget = 0);

// Real points on random rational lines, Newton-polished at the field's
// precision; each satisfies |F(w)| < tau * |grad F(w)| * |w| (max norms) and
// is scaled to unit max norm.
std::vector<RVector> hypersurface_points_approx(const ImplicitHypersurface& z, std::size_t count, std::uint64_t seed,
                                                const ApproxField& f, std::size_t budget = 0);

}  // namespace leglab
