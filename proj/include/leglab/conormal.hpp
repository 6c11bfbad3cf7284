#pragma once

#include <memory>

#include "leglab/legendrian.hpp"

namespace leglab {

// Lift of Z in P(W) to P(W + W*). A parametrized source z(t) of codimension c
// lifts to (z(t), s_1 beta_1(t) + ... + s_c beta_c(t)), where the beta_l are
// generalized cross products of the tangent rows with fixed auxiliary
// covectors; the s_l are declared fiber-linear. A hypersurface source lifts
// pointwise to (w, s grad F(w)).
struct ConormalLift {
  std::string name;
  std::size_t w_dim = 0;  // n + 1
  std::size_t codim = 0;
  std::shared_ptr<const ParamVariety> source_param;
  std::shared_ptr<const ParamVariety> lift;
  std::vector<QVector> aux;  // auxiliary vectors, codim >= 2 only
  std::shared_ptr<const ImplicitHypersurface> source_hyp;

  bool is_param() const { return static_cast<bool>(lift); }
  std::size_t n() const { return w_dim - 1; }
  SymplecticForm form() const { return SymplecticForm::standard(w_dim); }
};

ConormalLift build_conormal_lift(std::shared_ptr<const ParamVariety> z, std::uint64_t seed = 0);
ConormalLift build_conormal_lift(std::shared_ptr<const ImplicitHypersurface> z);

template <class T>
struct LiftPoint {
  std::vector<T> params;  // lift parameters (source params then fiber coordinates), or (w, s)
  std::vector<T> w;
  std::vector<T> alpha;
  std::vector<T> point() const {
    auto p = w;
    p.insert(p.end(), alpha.begin(), alpha.end());
    return p;
  }
};

std::vector<LiftPoint<Rational>> lift_samples_exact(const ConormalLift& l, std::size_t count, std::uint64_t seed);
std::vector<LiftPoint<BigFloat>> lift_samples_approx(const ConormalLift& l, std::size_t count, std::uint64_t seed,
                                                     const ApproxField& f);

// Lift point at a parametrized source's lift parameters, or at (w, s).
LiftPoint<Rational> lift_point(const ConormalLift& l, const std::vector<Rational>& params);

// Spans the cone tangent space at the lift point. Hypersurface case:
// (w, s alpha), (z, s Hess(w) z) for z in ker grad F(w), and (0, alpha).
TangentFrame lift_tangent_frame(const ConormalLift& l, const LiftPoint<Rational>& p);
ApproxFrame lift_tangent_frame(const ConormalLift& l, const LiftPoint<BigFloat>& p, const ApproxField& f);

// sum_i x_i y^i for a point (x, y) of W + W*.
template <class T>
T incidence_quadric_residual(std::span<const T> point) {
  if (point.size() % 2) throw DimensionMismatch("incidence quadric: odd-length point");
  const std::size_t n = point.size() / 2;
  T acc = zero_like(point[0]);
  for (std::size_t i = 0; i < n; ++i) acc += point[i] * point[n + i];
  return acc;
}

// (t w, alpha / t) is the lift at fiber coordinates s / t^2, as projective points.
bool torus_action_check(const ConormalLift& l, const LiftPoint<Rational>& p, const Rational& t);

// Chart coordinates (x_1..x_n, y^0..y^{n-1}) with x_0 = y^n = 1 map to
// [y^1..y^{n-1}, y^0 - x_n, x_1..x_{n-1}, 1].
QVector phi_chart_map(std::size_t n, const QVector& chart);
// Same map on a full point (w, alpha); throws PreconditionError if w_0 or
// alpha_n vanishes.
QVector phi_chart_map(const QVector& w, const QVector& alpha);

// Conormal lift check: isotropy and rank of lift frames under the split form,
// incidence residuals, torus invariance (10 values of t per exact sample) and,
// for parametrized sources, conormal fiber dimension jumps.
Report check_conormal_lift(const ConormalLift& l, std::size_t nsamples, std::uint64_t seed,
                           const BackendConfig& cfg = {});

// Reduction by x_0 - y^n = 0 against phi. With `permute` two target
// coordinates are swapped first (negative control).
Report reduction_agreement_check(const ConormalLift& l, std::size_t nsamples, std::uint64_t seed, bool permute = false);

// Strata: A at [w, 0], B at [0, alpha] (hypersurfaces only), C at general
// points. Known singular points of Z are probed in stratum A and must drop.
Report singularity_classification_probe(const ConormalLift& l, std::size_t nsamples, std::uint64_t seed,
                                        const std::vector<QVector>& known_singular = {},
                                        const BackendConfig& cfg = {});

}  // namespace leglab
