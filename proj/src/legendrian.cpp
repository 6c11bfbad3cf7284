#include "leglab/legendrian.hpp"

#include <chrono>
#include <set>

#include "leglab/parallel.hpp"
#include "leglab/rng.hpp"
#include "leglab/roots.hpp"

namespace leglab {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<std::string> param_strings(const std::vector<Rational>& t) {
  std::vector<std::string> out;
  for (const auto& x : t) out.push_back(rational_string(x));
  return out;
}

std::vector<std::string> param_strings(const std::vector<BigFloat>& t) {
  std::vector<std::string> out;
  for (const auto& x : t) out.push_back(x.to_string(20));
  return out;
}

struct FrameOutcome {
  std::size_t rank = 0;
  std::size_t violations = 0;
  std::string first;
  std::optional<BigFloat> worst;
};

void check_width(const std::vector<std::vector<Rational>>& vs, std::size_t d) {
  for (const auto& v : vs)
    if (v.size() != d) throw DimensionMismatch("frame vector does not match the form's dimension");
}

void check_width(const std::vector<std::vector<BigFloat>>& vs, std::size_t d) {
  for (const auto& v : vs)
    if (v.size() != d) throw DimensionMismatch("frame vector does not match the form's dimension");
}

template <class T>
void aggregate(Report& rep, const std::vector<Frame<T>>& frames, const std::vector<FrameOutcome>& out,
               std::size_t expected_rank) {
  std::optional<BigFloat> worst;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& o = out[i];
    ++rep.samples_evaluated;
    ++rep.rank_histogram[o.rank];
    if (o.rank != expected_rank) {
      ++rep.rank_failures;
      rep.add_witness({param_strings(frames[i].params),
                       "frame rank " + std::to_string(o.rank) + ", expected " + std::to_string(expected_rank)});
    }
    if (o.violations) {
      ++rep.isotropy_violations;
      rep.add_witness({param_strings(frames[i].params), o.first});
    }
    if (o.worst && (!worst || *worst < *o.worst)) worst = o.worst;
  }
  if (worst) rep.worst_residual = worst->to_string(6);
}

}  // namespace

void check_frames(Report& rep, const std::vector<TangentFrame>& frames, const QMatrix& omega, std::size_t expected_rank) {
  rep.expected_rank = expected_rank;
  rep.ambient = omega.rows();
  for (const auto& fr : frames) check_width(fr.vectors, omega.rows());
  const auto out = parallel_map(frames.size(), [&](std::size_t i) {
    FrameOutcome o;
    const auto& v = frames[i].vectors;
    o.rank = rank(stack_rows(v, omega.rows()));
    for (std::size_t a = 0; a < v.size(); ++a)
      for (std::size_t b = a + 1; b < v.size(); ++b) {
        const Rational val = omega_eval<Rational>(omega, v[a], v[b]);
        if (sgn(val) == 0) continue;
        if (o.violations++ == 0)
          o.first = "omega(v" + std::to_string(a) + ", v" + std::to_string(b) + ") = " + rational_string(val);
      }
    return o;
  });
  aggregate(rep, frames, out, expected_rank);
}

void check_frames(Report& rep, const std::vector<ApproxFrame>& frames, const QMatrix& omega, std::size_t expected_rank,
                  const ApproxField& f) {
  rep.expected_rank = expected_rank;
  rep.ambient = omega.rows();
  for (const auto& fr : frames) check_width(fr.vectors, omega.rows());
  const RMatrix om = convert(omega, f);
  std::vector<BigFloat> flat;
  for (std::size_t i = 0; i < om.rows(); ++i)
    for (const auto& x : om.row(i)) flat.push_back(x);
  const BigFloat onorm = max_abs(flat);
  const auto out = parallel_map(frames.size(), [&](std::size_t i) {
    FrameOutcome o;
    const auto& v = frames[i].vectors;
    o.rank = rank(stack_rows(v, omega.rows()), f);
    o.worst = f.zero();
    for (std::size_t a = 0; a < v.size(); ++a)
      for (std::size_t b = a + 1; b < v.size(); ++b) {
        const BigFloat scale = max_abs(v[a]) * max_abs(v[b]) * onorm;
        if (scale.sign() == 0) continue;
        const BigFloat res = abs(omega_eval<BigFloat>(om, v[a], v[b])) / scale;
        if (*o.worst < res) o.worst = res;
        if (res < f.tolerance) continue;
        if (o.violations++ == 0)
          o.first = "|omega(v" + std::to_string(a) + ", v" + std::to_string(b) + ")| = " + res.to_string(6) + " (relative)";
      }
    return o;
  });
  aggregate(rep, frames, out, expected_rank);
}

Report check_legendrian(const ParamVariety& x, const SymplecticForm& form, std::size_t nsamples, std::uint64_t seed,
                        const BackendConfig& cfg) {
  if (x.ambient() != form.dim()) throw DimensionMismatch("variety ambient dimension does not match the form");
  const auto t0 = Clock::now();
  Report rep;
  rep.kind = "legendrian";
  rep.variety = x.name();
  rep.backend = cfg.backend;
  rep.precision_bits = cfg.backend == Backend::approx ? cfg.precision : 0;
  rep.seed = seed;
  rep.samples_requested = nsamples;
  const auto params = sample_points(x, nsamples, seed);
  if (cfg.backend == Backend::exact) {
    const auto frames = parallel_map(params.size(), [&](std::size_t i) { return cone_tangent_frame(x, params[i]); });
    check_frames(rep, frames, form.matrix(), form.half_dim());
  } else {
    const ApproxField f = cfg.field();
    const auto frames = parallel_map(params.size(), [&](std::size_t i) {
      const auto t = convert(std::span<const Rational>(params[i]), f);
      return x.frame(std::span<const BigFloat>(t), f);
    });
    check_frames(rep, frames, form.matrix(), form.half_dim(), f);
  }
  rep.settle();
  rep.seconds = since(t0);
  return rep;
}

std::optional<ParamPair> witness_nonisotropic_pair(const ParamVariety& x, const SymplecticForm& form,
                                                   std::size_t budget, std::uint64_t seed) {
  if (x.ambient() != form.dim()) throw DimensionMismatch("variety ambient dimension does not match the form");
  Rng rng(mix_seed(seed, 0x3a1));
  const std::size_t m = x.param_count();
  auto candidate = [&](std::size_t idx) {
    if (idx == 0) return std::vector<Rational>(m, Rational(0));
    if (idx == 1) return std::vector<Rational>(m, Rational(1));
    std::vector<Rational> t;
    for (std::size_t i = 0; i < m; ++i) t.push_back(rng.rational(100));
    return t;
  };
  for (std::size_t k = 0; k < budget; ++k) {
    auto t1 = candidate(2 * k);
    auto t2 = candidate(2 * k + 1);
    const auto p1 = x.point(std::span<const Rational>(t1), ExactField{});
    const auto p2 = x.point(std::span<const Rational>(t2), ExactField{});
    if (sgn(omega_eval(form, p1, p2)) != 0) return ParamPair{std::move(t1), std::move(t2)};
  }
  return std::nullopt;
}

std::string to_string(SectionStrategy s) {
  switch (s) {
    case SectionStrategy::fiber_linear: return "fiber_linear";
    case SectionStrategy::univariate: return "univariate";
    case SectionStrategy::newton: return "newton";
  }
  return "newton";
}

namespace {

QVector row_of(const QMatrix& m, std::size_t i) { return m.row_vector(i); }

// Constraint values A p and the Jacobian columns A dp/dt_j from a frame.
template <class T>
std::vector<std::vector<T>> constrain(const Matrix<T>& a, const std::vector<std::vector<T>>& vecs) {
  std::vector<std::vector<T>> out;
  for (const auto& v : vecs) out.push_back(a * v);
  return out;
}

void enumerate_subsets(const std::vector<std::size_t>& pool, std::size_t k, std::size_t start,
                       std::vector<std::size_t>& cur, std::vector<std::vector<std::size_t>>& out) {
  if (out.size() > 200) return;
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < pool.size(); ++i) {
    cur.push_back(pool[i]);
    enumerate_subsets(pool, k, i + 1, cur, out);
    cur.pop_back();
  }
}

std::vector<Rational> draw_params(Rng& rng, std::size_t m) {
  std::vector<Rational> t;
  for (std::size_t i = 0; i < m; ++i) t.push_back(rng.rational(100));
  return t;
}

// Solves the constraints for the fiber subset with the other parameters fixed.
std::optional<std::vector<Rational>> solve_fiber(const ReducedVariety& r, std::vector<Rational> t) {
  const auto& s = r.fiber_subset;
  for (auto i : s) t[i] = 0;
  TangentFrame fr;
  try {
    fr = r.source->frame(std::span<const Rational>(t), ExactField{});
  } catch (const PreconditionError&) {
    // p vanishes with the fiber parameters at zero; the constant term is zero.
    fr.vectors.assign(1, QVector(r.source->ambient()));
    for (std::size_t j = 0; j < r.source->param_count(); ++j) {
      QVector col;
      for (const auto& c : r.source->coords()) col.push_back(evaluate(partial(c, j), std::span<const Rational>(t), ExactField{}));
      fr.vectors.push_back(col);
    }
  }
  const std::size_t k = s.size();
  const QVector g0 = r.constraints * fr.vectors[0];
  QMatrix m(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    const QVector col = r.constraints * fr.vectors[1 + s[j]];
    for (std::size_t i = 0; i < k; ++i) m(i, j) = col[i];
  }
  QVector rhs;
  for (const auto& x : g0) rhs.push_back(-x);
  const auto sol = solve_linear(m, rhs);
  if (sol.kind != SolveKind::unique) return std::nullopt;
  for (std::size_t j = 0; j < k; ++j) t[s[j]] = sol.particular[j];
  return t;
}

void plan_sections(ReducedVariety& r, std::uint64_t seed) {
  const std::size_t k = r.depth();
  std::vector<std::size_t> cur;
  std::vector<std::vector<std::size_t>> subsets;
  enumerate_subsets(r.source->fiber_linear(), k, 0, cur, subsets);
  Rng rng(mix_seed(seed, 0x91a));
  for (const auto& s : subsets) {
    if (!r.source->jointly_linear(s)) continue;
    r.fiber_subset = s;
    bool ok = false;
    for (int trial = 0; trial < 3 && !ok; ++trial) ok = solve_fiber(r, draw_params(rng, r.source->param_count())).has_value();
    if (ok) {
      r.strategy = SectionStrategy::fiber_linear;
      return;
    }
  }
  r.fiber_subset.clear();
  r.strategy = k == 1 ? SectionStrategy::univariate : SectionStrategy::newton;
}

// Section data at parameters t, or nothing at base points, rank-deficient
// source points and the center itself.
template <class Field>
std::optional<SectionSample<typename Field::value_type>> make_sample(const ReducedVariety& r,
                                                                     const std::vector<typename Field::value_type>& t,
                                                                     const Field& f) {
  using T = typename Field::value_type;
  Frame<T> fr;
  try {
    fr = r.source->frame(std::span<const T>(t), f);
  } catch (const PreconditionError&) {
    return std::nullopt;
  }
  const std::size_t d = r.source->ambient();
  const auto fm = stack_rows(fr.vectors, d);
  std::size_t rk;
  if constexpr (std::is_same_v<T, Rational>)
    rk = rank(fm);
  else
    rk = rank(fm, f);
  if (rk < r.source_rank) return std::nullopt;
  const auto a = convert(r.constraints, f);
  const auto q = convert(r.projection, f);
  Matrix<T> b(a.rows(), fr.vectors.size(), f.zero());
  for (std::size_t j = 0; j < fr.vectors.size(); ++j) {
    const auto col = a * fr.vectors[j];
    for (std::size_t i = 0; i < a.rows(); ++i) b(i, j) = col[i];
  }
  std::vector<std::vector<T>> ker;
  if constexpr (std::is_same_v<T, Rational>)
    ker = kernel_basis(b);
  else
    ker = kernel_basis(b, f);
  SectionSample<T> s;
  s.params = t;
  s.point = fr.vectors[0];
  s.projected = q * s.point;
  if (all_zero(s.projected, f)) return std::nullopt;
  s.frame.push_back(s.projected);
  for (const auto& c : ker) {
    std::vector<T> v(d, f.zero());
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (is_structural_zero(c[j])) continue;
      for (std::size_t i = 0; i < d; ++i) v[i] += c[j] * fr.vectors[j][i];
    }
    s.frame.push_back(q * v);
    s.source_frame.push_back(std::move(v));
  }
  return s;
}

UPoly univariate_constraint(const ReducedVariety& r, const std::vector<Rational>& t, std::size_t free) {
  const auto& x = *r.source;
  const std::vector<std::string> var{x.params()[free]};
  std::map<std::string, Binding> bind;
  for (std::size_t i = 0; i < x.param_count(); ++i)
    if (i != free) bind.emplace(x.params()[i], t[i]);
  MultiPoly g(var);
  const QVector a = row_of(r.constraints, 0);
  for (std::size_t i = 0; i < x.ambient(); ++i)
    if (sgn(a[i]) != 0) g += substitute(x.coords()[i], bind, var) * a[i];
  return UPoly::from_multipoly(g);
}

// Free parameters for the univariate strategy: those that occur at all.
std::vector<std::size_t> occurring_params(const ParamVariety& x) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < x.param_count(); ++i)
    for (const auto& c : x.coords())
      if (c.degree_in(i) > 0) {
        out.push_back(i);
        break;
      }
  return out;
}

}  // namespace

ReducedVariety hyperplane_reduce(std::shared_ptr<const ParamVariety> x, const SymplecticForm& form, const QVector& a,
                                 std::uint64_t seed, const std::optional<std::vector<QVector>>& section) {
  if (x->ambient() != form.dim()) throw DimensionMismatch("variety ambient dimension does not match the form");
  if (a.size() != form.dim()) throw DimensionMismatch("hyperplane covector has the wrong size");
  if (is_zero_vector(a)) throw PreconditionError("hyperplane covector is zero");
  ReducedVariety r;
  r.source = x;
  r.form = form;
  r.source_rank = generic_rank(*x, seed);
  QuotientChart chart = induced_form(form, a, section);
  const auto probe = sample_points(*x, 10, mix_seed(seed, 0x7e7));
  const auto in_span = parallel_map(probe.size(), [&](std::size_t i) {
    auto vs = cone_tangent_frame(*x, probe[i]).vectors;
    const auto r0 = rank(stack_rows(vs, form.dim()));
    vs.push_back(chart.hyperplane.h);
    return rank(stack_rows(vs, form.dim())) == r0;
  });
  if (std::all_of(in_span.begin(), in_span.end(), [](bool b) { return b; }))
    throw PreconditionError("vertex hyperplane: the center line lies in every sampled tangent space");
  r.constraints = stack_rows({chart.hyperplane.a}, form.dim());
  r.projection = chart.q;
  r.stages.push_back({std::move(chart)});
  plan_sections(r, seed);
  return r;
}

ReducedVariety hyperplane_reduce(const ReducedVariety& prev, const QVector& a, std::uint64_t seed) {
  if (a.size() != prev.ambient()) throw DimensionMismatch("hyperplane covector has the wrong size");
  if (is_zero_vector(a)) throw PreconditionError("hyperplane covector is zero");
  if (prev.ambient() < 4) throw PreconditionError("ambient space too small for another reduction");
  if (prev.expected_rank() < 2) throw PreconditionError("reduced variety has no dimension left to cut");
  QuotientChart chart = induced_form(SymplecticForm(prev.omega_prime()), a);
  // Vertex probe on sections of the previous stage.
  bool all_in = true;
  const std::size_t d = prev.ambient();
  if (prev.strategy != SectionStrategy::newton) {
    for (const auto& s : section_samples_exact(prev, 10, mix_seed(seed, 0x7e7))) {
      auto vs = s.frame;
      const auto r0 = rank(stack_rows(vs, d));
      vs.push_back(chart.hyperplane.h);
      all_in = all_in && rank(stack_rows(vs, d)) == r0;
    }
  } else {
    const ApproxField f(128);
    const auto h = convert(std::span<const Rational>(chart.hyperplane.h), f);
    for (const auto& s : section_samples_approx(prev, 10, mix_seed(seed, 0x7e7), f)) {
      auto vs = s.frame;
      const auto r0 = rank(stack_rows(vs, d), f);
      vs.push_back(h);
      all_in = all_in && rank(stack_rows(vs, d), f) == r0;
    }
  }
  if (all_in) throw PreconditionError("vertex hyperplane: the center line lies in every sampled tangent space");
  ReducedVariety r = prev;
  QMatrix arow = stack_rows({a}, d);
  const QMatrix pulled = arow * prev.projection;
  r.constraints.append_row(pulled.row(0));
  r.projection = chart.q * prev.projection;
  r.stages.push_back({std::move(chart)});
  plan_sections(r, seed);
  return r;
}

ReducedVariety coisotropic_reduce(std::shared_ptr<const ParamVariety> x, const SymplecticForm& form, std::size_t k,
                                  std::uint64_t seed) {
  const std::size_t dim = generic_rank(*x, seed) - 1;
  if (k < 1 || k > dim) throw PreconditionError("coisotropic_reduce: k must be between 1 and dim X");
  if (k > form.half_dim() - 1) throw PreconditionError("coisotropic_reduce: k too large for the ambient space");
  Rng rng(mix_seed(seed, 0xc015));
  auto random_covector = [&](std::size_t d) {
    QVector a(d);
    while (is_zero_vector(a))
      for (auto& v : a) v = rng.uniform_int(-9, 9);
    return a;
  };
  ReducedVariety r = hyperplane_reduce(x, form, random_covector(form.dim()), mix_seed(seed, 1));
  for (std::size_t i = 2; i <= k; ++i) r = hyperplane_reduce(r, random_covector(r.ambient()), mix_seed(seed, i));
  return r;
}

std::vector<SectionSample<Rational>> section_samples_exact(const ReducedVariety& r, std::size_t count,
                                                           std::uint64_t seed) {
  if (count == 0) throw PreconditionError("section sampler: count must be at least 1");
  if (r.strategy == SectionStrategy::newton)
    throw PreconditionError("no exact section strategy: needs " + std::to_string(r.depth()) +
                            " jointly linear parameters or a single hyperplane");
  const ParamVariety& x = *r.source;
  const std::size_t m = x.param_count();
  const ExactField ef;
  Rng rng(mix_seed(seed, 0x5ec));
  const auto free = occurring_params(x);
  const bool finite = (r.strategy == SectionStrategy::fiber_linear && r.fiber_subset.size() == free.size()) ||
                      (r.strategy == SectionStrategy::univariate && free.size() <= 1);
  std::vector<SectionSample<Rational>> out;
  std::set<std::vector<Rational>> seen;
  const std::size_t budget = finite ? 1 : 20 * count + 200;
  std::size_t attempts = 0;
  while (out.size() < count && attempts < budget) {
    std::vector<std::vector<Rational>> batch;
    const std::size_t want = count - out.size();
    while (batch.size() < want && attempts < budget) {
      const std::size_t attempt = attempts++;
      auto t = draw_params(rng, m);
      if (r.strategy == SectionStrategy::fiber_linear) {
        if (auto s = solve_fiber(r, t); s && seen.insert(*s).second) batch.push_back(std::move(*s));
        continue;
      }
      if (free.empty()) break;
      const std::size_t fv = free[attempt % free.size()];
      const UPoly g = univariate_constraint(r, t, fv);
      if (g.degree() < 1) continue;
      for (const auto& root : isolate_real_roots(g).roots) {
        if (!root.exact) continue;
        t[fv] = root.value;
        if (seen.insert(t).second) batch.push_back(t);
      }
    }
    auto made = parallel_map(batch.size(), [&](std::size_t i) { return make_sample(r, batch[i], ef); });
    for (auto& s : made)
      if (s && out.size() < count) out.push_back(std::move(*s));
  }
  if (out.empty() || (!finite && out.size() < count))
    throw BudgetExhausted("section sampler: not enough exact section points within budget");
  return out;
}

namespace {

std::optional<RVector> newton_section(const ReducedVariety& r, RVector t, const ApproxField& f) {
  const auto a = convert(r.constraints, f);
  const std::size_t k = a.rows(), m = t.size();
  std::vector<BigFloat> flat;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (const auto& x : a.row(i)) flat.push_back(x);
  const BigFloat anorm = max_abs(flat);
  const BigFloat stop = BigFloat::pow2(-static_cast<long>(f.precision) + 12, f.precision);
  const BigFloat blowup(100000000L, f.precision);
  for (int it = 0; it < 80; ++it) {
    ApproxFrame fr;
    try {
      fr = r.source->frame(std::span<const BigFloat>(t), f);
    } catch (const PreconditionError&) {
      return std::nullopt;
    }
    const RVector g = a * fr.vectors[0];
    const BigFloat pn = max_abs(fr.vectors[0]);
    const BigFloat scale = anorm * (pn > f.one() ? pn : f.one());
    if (max_abs(g) <= stop * scale) return t;
    RMatrix j(k, m, f.zero());
    for (std::size_t c = 0; c < m; ++c) {
      const RVector col = a * fr.vectors[c + 1];
      for (std::size_t i = 0; i < k; ++i) j(i, c) = col[i];
    }
    const RMatrix jjt = j * j.transpose();
    const auto sol = solve_linear(jjt, std::span<const BigFloat>(g), f);
    if (sol.kind != SolveKind::unique) return std::nullopt;
    const RMatrix jt = j.transpose();
    const RVector step = jt * sol.particular;
    for (std::size_t c = 0; c < m; ++c) t[c] -= step[c];
    if (blowup < max_abs(t)) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::vector<SectionSample<BigFloat>> section_samples_approx(const ReducedVariety& r, std::size_t count,
                                                            std::uint64_t seed, const ApproxField& f) {
  if (count == 0) throw PreconditionError("section sampler: count must be at least 1");
  std::vector<SectionSample<BigFloat>> out;
  if (r.strategy == SectionStrategy::fiber_linear) {
    for (const auto& s : section_samples_exact(r, count, seed)) {
      const auto t = convert(std::span<const Rational>(s.params), f);
      if (auto a = make_sample(r, t, f)) out.push_back(std::move(*a));
    }
    if (out.empty()) throw BudgetExhausted("section sampler: no approximate section points");
    return out;
  }
  const ParamVariety& x = *r.source;
  const std::size_t m = x.param_count();
  Rng rng(mix_seed(seed, 0x5ed));
  const auto free = occurring_params(x);
  const bool finite = r.strategy == SectionStrategy::univariate && free.size() <= 1;
  const std::size_t budget = finite ? 1 : 20 * count + 200;
  std::size_t attempts = 0;
  while (out.size() < count && attempts < budget) {
    std::vector<RVector> batch;
    const std::size_t want = count - out.size();
    std::vector<std::vector<Rational>> starts;
    while (starts.size() + batch.size() < want && attempts < budget) {
      const std::size_t attempt = attempts++;
      if (r.strategy == SectionStrategy::newton) {
        std::vector<Rational> t;
        for (std::size_t i = 0; i < m; ++i) t.push_back(rng.rational(10));
        starts.push_back(std::move(t));
        continue;
      }
      if (free.empty()) break;
      auto t = draw_params(rng, m);
      const std::size_t fv = free[attempt % free.size()];
      const UPoly g = univariate_constraint(r, t, fv);
      if (g.degree() < 1) continue;
      for (const auto& root : isolate_real_roots(g).roots) {
        if (root.multiple) continue;
        RVector tt = convert(std::span<const Rational>(t), f);
        tt[fv] = polish(g, root, f);
        batch.push_back(std::move(tt));
      }
    }
    auto solved = parallel_map(starts.size(), [&](std::size_t i) {
      return newton_section(r, convert(std::span<const Rational>(starts[i]), f), f);
    });
    for (auto& s : solved)
      if (s) batch.push_back(std::move(*s));
    auto made = parallel_map(batch.size(), [&](std::size_t i) { return make_sample(r, batch[i], f); });
    for (auto& s : made)
      if (s && out.size() < count) out.push_back(std::move(*s));
  }
  if (out.empty() || (!finite && out.size() < count))
    throw BudgetExhausted("section sampler: not enough approximate section points within budget");
  return out;
}

QMatrix corrupt_form(const QMatrix& omega) {
  QMatrix m = omega;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (sgn(m(i, j)) != 0) {
        m(i, j) = -m(i, j);
        m(j, i) = -m(j, i);
        return m;
      }
  if (m.rows() >= 2) {
    m(0, 1) = 1;
    m(1, 0) = -1;
  }
  return m;
}

namespace {

Json covector_json(const QVector& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(rational_string(x));
  return j;
}

template <class T>
Frame<T> as_frame(const SectionSample<T>& s) {
  Frame<T> fr;
  fr.params = s.params;
  fr.vectors = s.frame;
  return fr;
}

}  // namespace

Report verify_reduction(const ReducedVariety& r, std::size_t nsamples, std::uint64_t seed, const BackendConfig& cfg,
                        const std::optional<QMatrix>& form_override) {
  const auto t0 = Clock::now();
  Report rep;
  rep.kind = "reduction";
  rep.variety = r.source->name();
  rep.backend = cfg.backend;
  rep.precision_bits = cfg.backend == Backend::approx ? cfg.precision : 0;
  rep.seed = seed;
  rep.samples_requested = nsamples;
  const QMatrix& omega = form_override ? *form_override : r.omega_prime();
  std::size_t preservation_failures = 0;
  if (cfg.backend == Backend::exact) {
    const auto samples = section_samples_exact(r, nsamples, seed);
    std::vector<TangentFrame> frames;
    for (const auto& s : samples) frames.push_back(as_frame(s));
    check_frames(rep, frames, omega, r.expected_rank());
    // omega'(q v, q w) = omega(v, w) on the intersected frames.
    const auto& full = r.form.matrix();
    for (const auto& s : samples)
      for (std::size_t a = 0; a < s.source_frame.size(); ++a)
        for (std::size_t b = a + 1; b < s.source_frame.size(); ++b)
          if (omega_eval<Rational>(r.omega_prime(), s.frame[a + 1], s.frame[b + 1]) !=
              omega_eval<Rational>(full, s.source_frame[a], s.source_frame[b]))
            ++preservation_failures;
    rep.details["form_preservation_failures"] = preservation_failures;
  } else {
    const ApproxField f = cfg.field();
    const auto samples = section_samples_approx(r, nsamples, seed, f);
    std::vector<ApproxFrame> frames;
    for (const auto& s : samples) frames.push_back(as_frame(s));
    check_frames(rep, frames, omega, r.expected_rank(), f);
  }
  std::size_t max_rank = 0;
  for (auto [k, v] : rep.rank_histogram) max_rank = std::max(max_rank, k);
  const int source_dim = static_cast<int>(r.source_rank) - 1;
  const int reduced_dim = static_cast<int>(max_rank) - 1;
  rep.details["source_ambient_dim"] = r.source->ambient();
  rep.details["reduced_ambient_dim"] = r.ambient();
  rep.details["stages"] = r.depth();
  rep.details["source_dimension"] = source_dim;
  rep.details["reduced_dimension"] = reduced_dim;
  rep.details["dimension_drop"] = source_dim - reduced_dim;
  rep.details["section_strategy"] = to_string(r.strategy);
  Json hs = Json::array();
  for (const auto& st : r.stages) hs.push_back(covector_json(st.chart.hyperplane.a));
  rep.details["hyperplanes"] = hs;
  if (form_override) rep.details["form_override"] = true;
  rep.settle();
  if (preservation_failures) rep.verdict = Verdict::fail;
  rep.seconds = since(t0);
  return rep;
}

Report secant_avoidance_probe(const ReducedVariety& r, std::size_t npairs, std::uint64_t seed,
                              const std::vector<QVector>& extra_points) {
  const auto t0 = Clock::now();
  Report rep;
  rep.kind = "secant_probe";
  rep.variety = r.source->name();
  rep.seed = seed;
  rep.samples_requested = npairs;
  const auto& chart = r.stages.back().chart;
  const QVector& h = chart.hyperplane.h;
  const std::size_t d = h.size();
  rep.ambient = d;
  QMatrix prev = QMatrix::identity(r.source->ambient(), 0, 1);
  for (std::size_t i = 0; i + 1 < r.depth(); ++i) prev = r.stages[i].chart.q * prev;

  std::size_t n = 2;
  while (n * (n - 1) / 2 < npairs) ++n;
  std::vector<QVector> pts = extra_points;
  for (const auto& p : pts)
    if (p.size() != d) throw DimensionMismatch("secant probe: extra point has the wrong size");
  for (const auto& s : section_samples_exact(r, n, seed)) pts.push_back(prev * s.point);
  if (pts.size() < 2) throw PreconditionError("secant probe: fewer than two section points");

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < extra_points.size(); ++i)
    for (std::size_t j = i + 1; j < extra_points.size(); ++j) pairs.emplace_back(i, j);
  std::vector<std::pair<std::size_t, std::size_t>> sampled;
  for (std::size_t i = extra_points.size(); i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) sampled.emplace_back(i, j);
  Rng rng(mix_seed(seed, 0x5ec7));
  for (std::size_t i = sampled.size(); i > 1; --i)
    std::swap(sampled[i - 1], sampled[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)))]);
  for (std::size_t i = 0; i < sampled.size() && i < npairs; ++i) pairs.push_back(sampled[i]);

  struct PairOutcome {
    bool distinct = false;
    std::size_t secant_rank = 0;
    bool collision = false;
  };
  const auto out = parallel_map(pairs.size(), [&](std::size_t i) {
    PairOutcome o;
    const auto& x1 = pts[pairs[i].first];
    const auto& x2 = pts[pairs[i].second];
    o.distinct = rank(stack_rows({x1, x2}, d)) == 2;
    if (!o.distinct) return o;
    o.secant_rank = rank(stack_rows({x1, x2, h}, d));
    const QVector y1 = chart.q * x1, y2 = chart.q * x2;
    o.collision = rank(stack_rows({y1, y2}, d - 2)) < 2;
    return o;
  });
  std::size_t hits = 0, collisions = 0, skipped = 0;
  Json ranks = Json::object();
  std::map<std::size_t, std::size_t> hist;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& o = out[i];
    if (!o.distinct) {
      ++skipped;
      continue;
    }
    ++rep.samples_evaluated;
    ++hist[o.secant_rank];
    if (o.collision) ++collisions;
    if (o.secant_rank == 2) {
      ++hits;
      rep.add_witness({{}, "center lies on the secant through points " + std::to_string(pairs[i].first) + " and " +
                               std::to_string(pairs[i].second)});
    }
  }
  rep.rank_histogram = hist;
  rep.expected_rank = 3;
  rep.details["pairs_tested"] = rep.samples_evaluated;
  rep.details["pairs_skipped"] = skipped;
  rep.details["hits"] = hits;
  rep.details["projection_collisions"] = collisions;
  rep.details["injective_on_samples"] = hits == 0 && collisions == 0;
  rep.details["center"] = covector_json(h);
  rep.settle();
  rep.seconds = since(t0);
  return rep;
}

}  // namespace leglab
