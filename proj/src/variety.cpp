#include "leglab/variety.hpp"

#include <algorithm>
#include <set>

#include "leglab/parallel.hpp"
#include "leglab/rng.hpp"
#include "leglab/roots.hpp"

namespace leglab {

ParamVariety::ParamVariety(std::string name, std::vector<std::string> params, std::vector<MultiPoly> coords,
                           std::vector<std::string> fiber_linear)
    : name_(std::move(name)), params_(std::move(params)), coords_(std::move(coords)) {
  if (coords_.empty()) throw PreconditionError("variety '" + name_ + "' has no coordinates");
  bool any = false;
  for (auto& c : coords_) {
    if (c.vars() != params_) c = rebase(c, params_);
    any = any || !c.is_zero();
  }
  if (!any) throw PreconditionError("variety '" + name_ + "' has all coordinates zero");
  partials_.resize(params_.size());
  for (std::size_t i = 0; i < params_.size(); ++i)
    for (const auto& c : coords_) partials_[i].push_back(partial(c, i));
  if (!fiber_linear.empty()) {
    declared_fiber_ = true;
    for (const auto& n : fiber_linear) {
      auto it = std::find(params_.begin(), params_.end(), n);
      if (it == params_.end()) throw UnknownVariable("fiber parameter '" + n + "' is not a parameter");
      const auto idx = static_cast<std::size_t>(it - params_.begin());
      if (!jointly_linear({idx})) throw PreconditionError("declared fiber parameter '" + n + "' is not linear");
      fiber_.push_back(idx);
    }
  } else {
    for (std::size_t i = 0; i < params_.size(); ++i)
      if (jointly_linear({i})) fiber_.push_back(i);
  }
}

bool ParamVariety::jointly_linear(const std::vector<std::size_t>& idx) const {
  for (const auto& c : coords_)
    for (const auto& [e, v] : c.terms()) {
      std::uint32_t deg = 0;
      for (auto i : idx) deg += e[i];
      if (deg > 1) return false;
    }
  return true;
}

TangentFrame cone_tangent_frame(const ParamVariety& x, std::span<const Rational> t) { return x.frame(t, ExactField{}); }

std::size_t jacobian_rank_at(const ParamVariety& x, std::span<const Rational> t) {
  return rank(frame_matrix(cone_tangent_frame(x, t)));
}

namespace {

std::vector<Rational> draw(Rng& rng, std::size_t m, std::int64_t height) {
  std::vector<Rational> t;
  for (std::size_t i = 0; i < m; ++i) t.push_back(rng.rational(height));
  return t;
}

// Rank at t, or -1 at a base point.
long rank_or_base(const ParamVariety& x, const std::vector<Rational>& t) {
  try {
    return static_cast<long>(jacobian_rank_at(x, t));
  } catch (const PreconditionError&) {
    return -1;
  }
}

}  // namespace

std::size_t generic_rank(const ParamVariety& x, std::uint64_t seed, std::int64_t height_bound) {
  Rng rng(mix_seed(seed, 0x9e4));
  std::vector<std::vector<Rational>> draws;
  for (int i = 0; i < 20; ++i) draws.push_back(draw(rng, x.param_count(), height_bound));
  const auto ranks = parallel_map(draws.size(), [&](std::size_t i) { return rank_or_base(x, draws[i]); });
  std::map<long, int> votes;
  for (auto r : ranks)
    if (r >= 0) ++votes[r];
  if (votes.empty()) throw BudgetExhausted("generic rank: every draw hit the base locus");
  long best = -1;
  int best_votes = 0;
  for (auto [r, v] : votes)
    if (v > best_votes || (v == best_votes && r > best)) {
      best = r;
      best_votes = v;
    }
  return static_cast<std::size_t>(best);
}

std::vector<std::vector<Rational>> sample_points(const ParamVariety& x, std::size_t count, std::uint64_t seed,
                                                 std::int64_t height_bound) {
  if (count == 0) throw PreconditionError("sample_points: count must be at least 1");
  if (height_bound < 1) throw PreconditionError("sample_points: height bound must be at least 1");
  const std::size_t target = generic_rank(x, seed, height_bound);
  Rng rng(mix_seed(seed, 0x5a3));
  std::vector<std::vector<Rational>> out;
  std::set<std::vector<Rational>> seen;
  const std::size_t budget = 20 * count + 200;
  std::size_t drawn = 0;
  while (out.size() < count) {
    if (drawn >= budget) throw BudgetExhausted("sample_points: retry budget exhausted for '" + x.name() + "'");
    std::vector<std::vector<Rational>> batch;
    const std::size_t want = std::min(count - out.size(), budget - drawn);
    while (batch.size() < want && drawn < budget) {
      auto t = draw(rng, x.param_count(), height_bound);
      ++drawn;
      if (seen.insert(t).second) batch.push_back(std::move(t));
    }
    const auto ranks = parallel_map(batch.size(), [&](std::size_t i) { return rank_or_base(x, batch[i]); });
    for (std::size_t i = 0; i < batch.size() && out.size() < count; ++i)
      if (ranks[i] >= static_cast<long>(target)) out.push_back(batch[i]);
  }
  return out;
}

DimensionEstimate dimension_estimate(const ParamVariety& x, std::size_t nsamples, std::uint64_t seed) {
  if (nsamples == 0) throw PreconditionError("dimension_estimate: nsamples must be at least 1");
  Rng rng(mix_seed(seed, 0xd13));
  std::vector<std::vector<Rational>> draws;
  for (std::size_t i = 0; i < nsamples; ++i) draws.push_back(draw(rng, x.param_count(), 100));
  const auto ranks = parallel_map(draws.size(), [&](std::size_t i) { return rank_or_base(x, draws[i]); });
  DimensionEstimate est;
  long best = -1;
  for (auto r : ranks) {
    if (r < 0) continue;
    ++est.evaluated;
    ++est.rank_histogram[static_cast<std::size_t>(r)];
    best = std::max(best, r);
  }
  est.inconclusive = est.evaluated == 0;
  est.dimension = est.inconclusive ? -1 : static_cast<int>(best) - 1;
  return est;
}

// ---------------------------------------------------------------------------

ImplicitHypersurface::ImplicitHypersurface(std::string name, MultiPoly f) : name_(std::move(name)), f_(std::move(f)) {
  if (f_.is_zero()) throw PreconditionError("hypersurface equation is zero");
  if (!f_.is_homogeneous()) throw PreconditionError("hypersurface equation is not homogeneous");
  for (std::size_t i = 0; i < ambient(); ++i) grad_.push_back(partial(f_, i));
  hess_.resize(ambient());
  for (std::size_t i = 0; i < ambient(); ++i)
    for (std::size_t j = 0; j < ambient(); ++j) hess_[i].push_back(partial(grad_[i], j));
}

QVector conormal_covector(const ImplicitHypersurface& z, std::span<const Rational> w) {
  if (w.size() != z.ambient()) throw DimensionMismatch("conormal_covector: point has the wrong size");
  if (sgn(z.value(w, ExactField{})) != 0) throw PreconditionError("point is not on the hypersurface");
  auto g = z.gradient(w, ExactField{});
  if (is_zero_vector(g)) throw PreconditionError("singular point: gradient vanishes");
  return g;
}

namespace {

BigFloat coefficient_norm(const MultiPoly& p, const ApproxField& f) {
  BigFloat s = f.zero();
  for (const auto& [e, c] : p.terms()) s += abs(f.from(c));
  return s;
}

BigFloat ipow(const BigFloat& x, int k, const ApproxField& f) {
  BigFloat r = f.one();
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

RVector conormal_covector(const ImplicitHypersurface& z, std::span<const BigFloat> w, const ApproxField& f) {
  if (w.size() != z.ambient()) throw DimensionMismatch("conormal_covector: point has the wrong size");
  const BigFloat wn = max_abs(w);
  const BigFloat scale = coefficient_norm(z.equation(), f) * ipow(wn, z.degree() - 1, f);
  auto g = z.gradient(w, f);
  if (max_abs(g) < f.tolerance * scale) throw PreconditionError("singular point: gradient vanishes");
  if (abs(z.value(w, f)) >= f.tolerance * max_abs(g) * wn) throw PreconditionError("point is not on the hypersurface");
  return g;
}

namespace {

const std::vector<std::string> kLineVar{"lambda_"};

UPoly restrict_to_line(const ImplicitHypersurface& z, const QVector& p, const QVector& d) {
  std::map<std::string, Binding> b;
  for (std::size_t i = 0; i < z.ambient(); ++i) {
    MultiPoly l = MultiPoly::variable(kLineVar, kLineVar[0]) * d[i];
    l += MultiPoly::constant(kLineVar, p[i]);
    b.emplace(z.vars()[i], std::move(l));
  }
  return UPoly::from_multipoly(substitute(z.equation(), b, kLineVar));
}

QVector random_int_vector(Rng& rng, std::size_t n, std::int64_t bound) {
  QVector v(n);
  for (auto& x : v) x = rng.uniform_int(-bound, bound);
  return v;
}

}  // namespace

std::vector<QVector> hypersurface_points_exact(const ImplicitHypersurface& z, std::size_t count, std::uint64_t seed,
                                               std::size_t budget) {
  if (count == 0) throw PreconditionError("hypersurface sampler: count must be at least 1");
  if (budget == 0) budget = 50 * count + 200;
  const std::size_t n = z.ambient();
  std::vector<std::size_t> linear;
  for (std::size_t i = 0; i < n; ++i)
    if (z.equation().degree_in(i) == 1) linear.push_back(i);
  Rng rng(mix_seed(seed, 0x4b5));
  std::vector<QVector> out;
  std::set<QVector> seen;
  auto accept = [&](QVector w) {
    if (is_zero_vector(w)) return;
    w = primitive(w);
    if (sgn(z.value(std::span<const Rational>(w), ExactField{})) != 0) return;
    if (is_zero_vector(z.gradient(std::span<const Rational>(w), ExactField{}))) return;
    if (out.size() < count && seen.insert(w).second) out.push_back(std::move(w));
  };
  for (std::size_t attempt = 0; out.size() < count; ++attempt) {
    if (attempt >= budget) throw BudgetExhausted("hypersurface sampler: no more rational points within budget");
    QVector p = random_int_vector(rng, n, 20);
    QVector d(n);
    if (!linear.empty() && attempt % 4 != 3) {
      d[linear[attempt % linear.size()]] = 1;
    } else {
      d = random_int_vector(rng, n, 20);
    }
    const UPoly g = restrict_to_line(z, p, d);
    if (g.is_zero() || g.degree() < 1) continue;
    for (const auto& r : isolate_real_roots(g).roots) {
      if (!r.exact) continue;
      QVector w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = p[i] + r.value * d[i];
      accept(std::move(w));
    }
  }
  return out;
}

std::vector<RVector> hypersurface_points_approx(const ImplicitHypersurface& z, std::size_t count, std::uint64_t seed,
                                                const ApproxField& f, std::size_t budget) {
  if (count == 0) throw PreconditionError("hypersurface sampler: count must be at least 1");
  if (budget == 0) budget = 50 * count + 200;
  const std::size_t n = z.ambient();
  Rng rng(mix_seed(seed, 0xa77));
  std::vector<RVector> out;
  for (std::size_t attempt = 0; out.size() < count; ++attempt) {
    if (attempt >= budget) throw BudgetExhausted("hypersurface sampler: no more real points within budget");
    const QVector p = random_int_vector(rng, n, 20);
    const QVector d = random_int_vector(rng, n, 20);
    const UPoly g = restrict_to_line(z, p, d);
    if (g.is_zero() || g.degree() < 1) continue;
    for (const auto& r : isolate_real_roots(g).roots) {
      if (r.multiple || out.size() >= count) continue;
      const BigFloat lam = polish(g, r, f);
      RVector w(n, f.zero());
      for (std::size_t i = 0; i < n; ++i) w[i] = f.from(p[i]) + lam * f.from(d[i]);
      const BigFloat norm = max_abs(w);
      if (norm.sign() == 0) continue;
      for (auto& x : w) x /= norm;
      try {
        conormal_covector(z, w, f);
      } catch (const PreconditionError&) {
        continue;
      }
      out.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace leglab
