#include "leglab/conormal.hpp"

#include <chrono>

#include "leglab/parallel.hpp"
#include "leglab/rng.hpp"

namespace leglab {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

MultiPoly det(const std::vector<std::vector<MultiPoly>>& m, const std::vector<std::string>& vars) {
  const std::size_t n = m.size();
  if (n == 0) return MultiPoly::constant(vars, 1);
  if (n == 1) return m[0][0];
  MultiPoly acc(vars);
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<MultiPoly>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<MultiPoly> row;
      for (std::size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(m[i][j]);
      minor.push_back(std::move(row));
    }
    const MultiPoly t = m[0][c] * det(minor, vars);
    if (c % 2)
      acc -= t;
    else
      acc += t;
  }
  return acc;
}

// Covector annihilating every row: signed maximal minors.
std::vector<MultiPoly> cross(const std::vector<std::vector<MultiPoly>>& rows, const std::vector<std::string>& vars) {
  const std::size_t n = rows.size() + 1;
  std::vector<MultiPoly> out;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<MultiPoly>> m;
    for (const auto& r : rows) {
      std::vector<MultiPoly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(r[k]);
      m.push_back(std::move(row));
    }
    MultiPoly d = det(m, vars);
    out.push_back(j % 2 ? -d : d);
  }
  return out;
}

std::string fresh_name(std::string base, const std::vector<std::string>& taken) {
  while (std::find(taken.begin(), taken.end(), base) != taken.end()) base += "_";
  return base;
}

std::vector<std::string> strings_of(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(rational_string(x));
  return out;
}

std::vector<std::string> strings_of(const std::vector<BigFloat>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.to_string(20));
  return out;
}

}  // namespace

ConormalLift build_conormal_lift(std::shared_ptr<const ParamVariety> z, std::uint64_t seed) {
  ConormalLift l;
  l.name = z->name();
  l.w_dim = z->ambient();
  const std::size_t m = z->param_count();
  if (generic_rank(*z, seed) != m + 1) throw PreconditionError("conormal lift: source parametrization is not immersive");
  if (l.w_dim < m + 2) throw PreconditionError("conormal lift: source fills its ambient space");
  l.codim = l.w_dim - m - 1;
  l.source_param = z;
  const auto& vars = z->params();
  std::vector<std::vector<MultiPoly>> tangent{z->coords()};
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<MultiPoly> row;
    for (const auto& c : z->coords()) row.push_back(partial(c, i));
    tangent.push_back(std::move(row));
  }
  Rng rng(mix_seed(seed, 0xa0c));
  if (l.codim >= 2)
    for (std::size_t i = 0; i < l.codim; ++i) {
      QVector v(l.w_dim);
      for (auto& x : v) x = rng.uniform_int(-9, 9);
      l.aux.push_back(v);
    }
  std::vector<std::vector<MultiPoly>> betas;
  for (std::size_t b = 0; b < l.codim; ++b) {
    auto rows = tangent;
    for (std::size_t i = 0; i < l.aux.size(); ++i) {
      if (i == b) continue;
      std::vector<MultiPoly> row;
      for (const auto& x : l.aux[i]) row.push_back(MultiPoly::constant(vars, x));
      rows.push_back(std::move(row));
    }
    betas.push_back(cross(rows, vars));
  }
  std::vector<std::string> lift_vars = vars;
  std::vector<std::string> fiber;
  for (std::size_t b = 0; b < l.codim; ++b) {
    const std::string name = fresh_name(l.codim == 1 ? "s" : "s" + std::to_string(b + 1), lift_vars);
    lift_vars.push_back(name);
    fiber.push_back(name);
  }
  std::vector<MultiPoly> coords;
  for (const auto& c : z->coords()) coords.push_back(rebase(c, lift_vars));
  for (std::size_t j = 0; j < l.w_dim; ++j) {
    MultiPoly a(lift_vars);
    for (std::size_t b = 0; b < l.codim; ++b) a += MultiPoly::variable(lift_vars, fiber[b]) * rebase(betas[b][j], lift_vars);
    coords.push_back(std::move(a));
  }
  l.lift = std::make_shared<const ParamVariety>(z->name() + "_lift", lift_vars, std::move(coords), fiber);
  if (generic_rank(*l.lift, seed) != l.w_dim) throw PreconditionError("conormal lift: conormal directions degenerate");
  return l;
}

ConormalLift build_conormal_lift(std::shared_ptr<const ImplicitHypersurface> z) {
  ConormalLift l;
  l.name = z->name();
  l.w_dim = z->ambient();
  l.codim = 1;
  if (z->degree() < 1) throw PreconditionError("conormal lift: constant equation");
  l.source_hyp = std::move(z);
  return l;
}

namespace {

template <class T>
LiftPoint<T> split_point(std::vector<T> params, const std::vector<T>& p, std::size_t n) {
  LiftPoint<T> out;
  out.params = std::move(params);
  out.w.assign(p.begin(), p.begin() + static_cast<long>(n));
  out.alpha.assign(p.begin() + static_cast<long>(n), p.end());
  return out;
}

std::vector<Rational> fiber_scales(std::size_t count, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x5ca));
  std::vector<Rational> out;
  while (out.size() < count) {
    const Rational s = rng.rational(100);
    if (sgn(s) != 0) out.push_back(s);
  }
  return out;
}

}  // namespace

LiftPoint<Rational> lift_point(const ConormalLift& l, const std::vector<Rational>& params) {
  if (l.is_param()) return split_point(params, l.lift->point(std::span<const Rational>(params), ExactField{}), l.w_dim);
  if (params.size() != l.w_dim + 1) throw DimensionMismatch("lift point: expected (w, s)");
  const std::vector<Rational> w(params.begin(), params.end() - 1);
  LiftPoint<Rational> out;
  out.params = params;
  out.w = w;
  out.alpha = conormal_covector(*l.source_hyp, w);
  for (auto& x : out.alpha) x *= params.back();
  return out;
}

std::vector<LiftPoint<Rational>> lift_samples_exact(const ConormalLift& l, std::size_t count, std::uint64_t seed) {
  std::vector<LiftPoint<Rational>> out;
  if (l.is_param()) {
    for (auto& t : sample_points(*l.lift, count, seed)) out.push_back(lift_point(l, t));
    return out;
  }
  const auto ws = hypersurface_points_exact(*l.source_hyp, count, seed);
  const auto ss = fiber_scales(ws.size(), seed);
  for (std::size_t i = 0; i < ws.size(); ++i) {
    auto params = ws[i];
    params.push_back(ss[i]);
    out.push_back(lift_point(l, params));
  }
  return out;
}

std::vector<LiftPoint<BigFloat>> lift_samples_approx(const ConormalLift& l, std::size_t count, std::uint64_t seed,
                                                     const ApproxField& f) {
  std::vector<LiftPoint<BigFloat>> out;
  if (l.is_param()) {
    for (auto& t : sample_points(*l.lift, count, seed)) {
      auto tt = convert(std::span<const Rational>(t), f);
      auto p = l.lift->point(std::span<const BigFloat>(tt), f);
      out.push_back(split_point(std::move(tt), p, l.w_dim));
    }
    return out;
  }
  const auto ws = hypersurface_points_approx(*l.source_hyp, count, seed, f);
  const auto ss = fiber_scales(ws.size(), seed);
  for (std::size_t i = 0; i < ws.size(); ++i) {
    LiftPoint<BigFloat> p;
    p.w = ws[i];
    const BigFloat s = f.from(ss[i]);
    p.alpha = conormal_covector(*l.source_hyp, std::span<const BigFloat>(p.w), f);
    for (auto& x : p.alpha) x *= s;
    p.params = p.w;
    p.params.push_back(s);
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

template <class Field>
Frame<typename Field::value_type> hyp_frame(const ImplicitHypersurface& z, const std::vector<typename Field::value_type>& w,
                                            const typename Field::value_type& s, const Field& f) {
  using T = typename Field::value_type;
  std::vector<T> alpha;
  if constexpr (std::is_same_v<T, Rational>)
    alpha = conormal_covector(z, std::span<const T>(w));
  else
    alpha = conormal_covector(z, std::span<const T>(w), f);
  const auto hess = z.hessian(std::span<const T>(w), f);
  const std::size_t n = w.size();
  Matrix<T> g(1, n, f.zero());
  for (std::size_t j = 0; j < n; ++j) g(0, j) = alpha[j];
  std::vector<std::vector<T>> ker;
  if constexpr (std::is_same_v<T, Rational>)
    ker = kernel_basis(g);
  else
    ker = kernel_basis(g, f);
  Frame<T> fr;
  fr.params = w;
  fr.params.push_back(s);
  auto join = [&](const std::vector<T>& a, const std::vector<T>& b) {
    auto v = a;
    v.insert(v.end(), b.begin(), b.end());
    return v;
  };
  std::vector<T> sa = alpha;
  for (auto& x : sa) x *= s;
  fr.vectors.push_back(join(w, sa));
  for (const auto& zv : ker) {
    auto hz = hess * zv;
    for (auto& x : hz) x *= s;
    fr.vectors.push_back(join(zv, hz));
  }
  fr.vectors.push_back(join(std::vector<T>(n, f.zero()), alpha));
  return fr;
}

}  // namespace

TangentFrame lift_tangent_frame(const ConormalLift& l, const LiftPoint<Rational>& p) {
  if (l.is_param()) return l.lift->frame(std::span<const Rational>(p.params), ExactField{});
  return hyp_frame(*l.source_hyp, p.w, p.params.back(), ExactField{});
}

ApproxFrame lift_tangent_frame(const ConormalLift& l, const LiftPoint<BigFloat>& p, const ApproxField& f) {
  if (l.is_param()) return l.lift->frame(std::span<const BigFloat>(p.params), f);
  return hyp_frame(*l.source_hyp, p.w, p.params.back(), f);
}

bool torus_action_check(const ConormalLift& l, const LiftPoint<Rational>& p, const Rational& t) {
  if (sgn(t) == 0) throw PreconditionError("torus action: t must be nonzero");
  std::vector<Rational> scaled;
  for (const auto& x : p.w) scaled.push_back(t * x);
  for (const auto& x : p.alpha) scaled.push_back(x / t);
  auto params = p.params;
  const Rational t2 = t * t;
  if (l.is_param()) {
    for (auto i : l.lift->fiber_linear()) params[i] /= t2;
  } else {
    params.back() /= t2;
  }
  const auto q = lift_point(l, params).point();
  return rank(stack_rows({scaled, q}, scaled.size())) == 1;
}

QVector phi_chart_map(std::size_t n, const QVector& chart) {
  if (n < 1) throw PreconditionError("phi: n must be at least 1");
  if (chart.size() != 2 * n) throw DimensionMismatch("phi: expected (x_1..x_n, y^0..y^{n-1})");
  const auto x = [&](std::size_t i) { return chart[i - 1]; };
  const auto y = [&](std::size_t i) { return chart[n + i]; };
  QVector out;
  for (std::size_t i = 1; i <= n - 1; ++i) out.push_back(y(i));
  out.push_back(y(0) - x(n));
  for (std::size_t i = 1; i <= n - 1; ++i) out.push_back(x(i));
  out.push_back(1);
  return out;
}

QVector phi_chart_map(const QVector& w, const QVector& alpha) {
  if (w.size() != alpha.size() || w.size() < 2) throw DimensionMismatch("phi: w and alpha must have equal size >= 2");
  const std::size_t n = w.size() - 1;
  if (sgn(w[0]) == 0 || sgn(alpha[n]) == 0) throw PreconditionError("phi: point outside the chart x_0 y^n != 0");
  QVector chart;
  for (std::size_t i = 1; i <= n; ++i) chart.push_back(w[i] / w[0]);
  for (std::size_t i = 0; i < n; ++i) chart.push_back(alpha[i] / alpha[n]);
  return phi_chart_map(n, chart);
}

Report check_conormal_lift(const ConormalLift& l, std::size_t nsamples, std::uint64_t seed, const BackendConfig& cfg) {
  const auto t0 = Clock::now();
  Report rep;
  rep.kind = "conormal_lift";
  rep.variety = l.name;
  rep.backend = cfg.backend;
  rep.precision_bits = cfg.backend == Backend::approx ? cfg.precision : 0;
  rep.seed = seed;
  rep.samples_requested = nsamples;
  const SymplecticForm form = l.form();
  const QMatrix& omega = form.matrix();
  std::size_t quadric_violations = 0, torus_checks = 0, torus_failures = 0, fiber_jumps = 0;
  if (cfg.backend == Backend::exact) {
    const auto pts = lift_samples_exact(l, nsamples, seed);
    const auto frames = parallel_map(pts.size(), [&](std::size_t i) { return lift_tangent_frame(l, pts[i]); });
    check_frames(rep, frames, omega, l.w_dim);
    Rng rng(mix_seed(seed, 0x70));
    std::vector<std::vector<Rational>> ts(pts.size());
    for (auto& v : ts)
      while (v.size() < 10) {
        const Rational t = rng.rational(100);
        if (sgn(t) != 0) v.push_back(t);
      }
    struct Extra {
      Rational quadric;
      std::size_t torus_failures = 0;
      bool jump = false;
    };
    const auto extra = parallel_map(pts.size(), [&](std::size_t i) {
      Extra e;
      const auto p = pts[i].point();
      e.quadric = incidence_quadric_residual(std::span<const Rational>(p));
      for (const auto& t : ts[i])
        if (!torus_action_check(l, pts[i], t)) ++e.torus_failures;
      if (l.is_param()) {
        const std::vector<Rational> t(pts[i].params.begin(), pts[i].params.begin() + static_cast<long>(l.source_param->param_count()));
        const auto fr = cone_tangent_frame(*l.source_param, t);
        e.jump = kernel_basis(stack_rows(fr.vectors, l.w_dim)).size() != l.codim;
      }
      return e;
    });
    for (std::size_t i = 0; i < extra.size(); ++i) {
      torus_checks += ts[i].size();
      if (sgn(extra[i].quadric) != 0) {
        ++quadric_violations;
        rep.add_witness({strings_of(pts[i].params), "incidence residual " + rational_string(extra[i].quadric)});
      }
      if (extra[i].torus_failures) {
        torus_failures += extra[i].torus_failures;
        rep.add_witness({strings_of(pts[i].params), "torus action leaves the lift"});
      }
      if (extra[i].jump) ++fiber_jumps;
    }
  } else {
    const ApproxField f = cfg.field();
    const auto pts = lift_samples_approx(l, nsamples, seed, f);
    const auto frames = parallel_map(pts.size(), [&](std::size_t i) { return lift_tangent_frame(l, pts[i], f); });
    check_frames(rep, frames, omega, l.w_dim, f);
    BigFloat worst = f.zero();
    for (const auto& p : pts) {
      const auto pt = p.point();
      const BigFloat scale = max_abs(p.w) * max_abs(p.alpha);
      const BigFloat r = scale.sign() == 0 ? f.zero() : abs(incidence_quadric_residual(std::span<const BigFloat>(pt))) / scale;
      if (worst < r) worst = r;
      if (!(r < f.tolerance)) {
        ++quadric_violations;
        rep.add_witness({strings_of(p.params), "relative incidence residual " + r.to_string(6)});
      }
    }
    rep.details["worst_quadric_residual"] = worst.to_string(6);
    rep.details["worst_quadric_exponent2"] = worst.sign() == 0 ? -static_cast<long>(f.precision) : worst.exponent2();
  }
  rep.details["quadric_violations"] = quadric_violations;
  if (cfg.backend == Backend::exact) {
    rep.details["torus_checks"] = torus_checks;
    rep.details["torus_failures"] = torus_failures;
  }
  if (l.is_param()) rep.details["fiber_jumps"] = fiber_jumps;
  rep.settle();
  rep.seconds = since(t0);
  return rep;
}

Report reduction_agreement_check(const ConormalLift& l, std::size_t nsamples, std::uint64_t seed, bool permute) {
  const auto t0 = Clock::now();
  if (!l.is_param()) throw PreconditionError("agreement check needs a parametrized source (exact sections)");
  if (l.w_dim < 2) throw PreconditionError("agreement check needs dim W >= 2");
  const std::size_t big_n = l.w_dim, n = big_n - 1, d = 2 * big_n;
  auto e = [&](std::size_t i) {
    QVector v(d);
    v[i] = 1;
    return v;
  };
  const auto X = [&](std::size_t i) { return i; };
  const auto Y = [&](std::size_t i) { return big_n + i; };
  QVector a = e(X(0));
  a[Y(n)] = -1;
  std::vector<QVector> section;
  for (std::size_t i = 1; i <= n - 1; ++i) section.push_back(e(Y(i)));
  section.push_back(e(Y(0)));
  for (std::size_t i = 1; i <= n - 1; ++i) section.push_back(e(X(i)));
  QVector last = e(X(0));
  last[Y(n)] = 1;
  section.push_back(last);

  Report rep;
  rep.kind = "agreement";
  rep.variety = l.name;
  rep.seed = seed;
  rep.samples_requested = nsamples;
  rep.ambient = d - 2;
  const auto r = hyperplane_reduce(l.lift, l.form(), a, seed, section);
  QVector expected_h = e(X(n));
  expected_h[Y(0)] = 1;
  if (r.stages[0].chart.hyperplane.h != expected_h) throw PreconditionError("agreement check: chart-basis mismatch");
  std::size_t agree = 0, mismatch = 0, outside = 0;
  for (const auto& s : section_samples_exact(r, nsamples, seed)) {
    const QVector w(s.point.begin(), s.point.begin() + static_cast<long>(big_n));
    const QVector alpha(s.point.begin() + static_cast<long>(big_n), s.point.end());
    QVector phi;
    try {
      phi = phi_chart_map(w, alpha);
    } catch (const PreconditionError&) {
      ++outside;
      continue;
    }
    if (permute) std::swap(phi[0], phi[1]);
    ++rep.samples_evaluated;
    if (primitive(phi) == primitive(s.projected)) {
      ++agree;
    } else {
      ++mismatch;
      std::string detail = "reduced [";
      for (std::size_t i = 0; i < s.projected.size(); ++i) detail += (i ? ", " : "") + rational_string(s.projected[i]);
      detail += "] vs phi [";
      for (std::size_t i = 0; i < phi.size(); ++i) detail += (i ? ", " : "") + rational_string(phi[i]);
      rep.add_witness({strings_of(s.params), detail + "]"});
    }
  }
  rep.details["agreements"] = agree;
  rep.details["mismatches"] = mismatch;
  rep.details["outside_chart"] = outside;
  rep.details["permuted_control"] = permute;
  rep.settle();
  rep.seconds = since(t0);
  return rep;
}

namespace {

// Jacobian of F and the 2x2 minors of (alpha; grad F) at (w, 0).
template <class Field>
Matrix<typename Field::value_type> stratum_a_jacobian(const ImplicitHypersurface& z,
                                                      const std::vector<typename Field::value_type>& w,
                                                      const Field& f) {
  using T = typename Field::value_type;
  const std::size_t n = w.size();
  const auto g = z.gradient(std::span<const T>(w), f);
  Matrix<T> j(0, 2 * n);
  std::vector<T> row(2 * n, f.zero());
  for (std::size_t i = 0; i < n; ++i) row[i] = g[i];
  j.append_row(row);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      std::vector<T> r(2 * n, f.zero());
      r[n + a] = g[b];
      r[n + b] = zero_like(g[a]) - g[a];
      j.append_row(r);
    }
  return j;
}

// Limit frame at [0, alpha]: (w, 0) and (0, Hess z) for z in ker grad F.
template <class Field>
Matrix<typename Field::value_type> stratum_b_frame(const ImplicitHypersurface& z,
                                                   const std::vector<typename Field::value_type>& w, const Field& f) {
  using T = typename Field::value_type;
  const std::size_t n = w.size();
  const auto g = z.gradient(std::span<const T>(w), f);
  const auto hess = z.hessian(std::span<const T>(w), f);
  Matrix<T> gm(1, n, f.zero());
  for (std::size_t j = 0; j < n; ++j) gm(0, j) = g[j];
  std::vector<std::vector<T>> ker;
  if constexpr (std::is_same_v<T, Rational>)
    ker = kernel_basis(gm);
  else
    ker = kernel_basis(gm, f);
  Matrix<T> out(0, 2 * n);
  std::vector<T> first = w;
  first.resize(2 * n, f.zero());
  out.append_row(first);
  for (const auto& zv : ker) {
    std::vector<T> r(n, f.zero());
    const auto hz = hess * zv;
    r.insert(r.end(), hz.begin(), hz.end());
    out.append_row(r);
  }
  return out;
}

template <class T>
std::size_t rank_of(const Matrix<T>& m, const ExactField&) {
  return rank(m);
}
inline std::size_t rank_of(const RMatrix& m, const ApproxField& f) { return rank(m, f); }

struct Probe {
  std::string stratum;
  std::string origin;
  std::vector<std::string> point;
  std::size_t rank = 0;
  std::size_t expected = 0;
};

template <class Field>
std::vector<typename Field::value_type> normalized(std::vector<typename Field::value_type> v, const Field& f) {
  if constexpr (std::is_same_v<typename Field::value_type, Rational>) {
    (void)f;
    return primitive(v);
  } else {
    const BigFloat m = max_abs(v);
    std::size_t lead = 0;
    while (lead < v.size() && abs(v[lead]) < m / BigFloat(2L, f.precision)) ++lead;
    BigFloat s = v[lead];
    for (auto& x : v) x /= s;
    return v;
  }
}

}  // namespace

Report singularity_classification_probe(const ConormalLift& l, std::size_t nsamples, std::uint64_t seed,
                                        const std::vector<QVector>& known_singular, const BackendConfig& cfg) {
  const auto t0 = Clock::now();
  Report rep;
  rep.kind = "singularity_probe";
  rep.variety = l.name;
  rep.backend = cfg.backend;
  rep.precision_bits = cfg.backend == Backend::approx ? cfg.precision : 0;
  rep.seed = seed;
  rep.samples_requested = nsamples;
  rep.ambient = 2 * l.w_dim;
  rep.expected_rank = l.w_dim;
  const std::size_t expected = l.w_dim;
  std::vector<Probe> probes;
  Json notes = Json::array();
  std::size_t clusters = 0;

  if (l.is_param()) {
    if (!known_singular.empty()) notes.push_back("known singular points ignored for parametrized sources");
    notes.push_back("stratum B skipped: dual variety data needs a hypersurface source");
    const auto params = sample_points(*l.lift, nsamples, seed);
    const std::size_t m = l.source_param->param_count();
    const auto out = parallel_map(params.size(), [&](std::size_t i) {
      const auto& t = params[i];
      const std::vector<Rational> src(t.begin(), t.begin() + static_cast<long>(m));
      // Stratum A: (T Z-hat, 0) + (0, conormal directions).
      const auto zf = cone_tangent_frame(*l.source_param, src);
      const auto lf = l.lift->frame(std::span<const Rational>(t), ExactField{});
      std::vector<QVector> rows;
      for (const auto& v : zf.vectors) {
        QVector r = v;
        r.resize(2 * l.w_dim);
        rows.push_back(r);
      }
      for (std::size_t b = 0; b < l.codim; ++b) {
        QVector r(l.w_dim);
        const auto& dv = lf.vectors[1 + m + b];
        r.insert(r.end(), dv.begin() + static_cast<long>(l.w_dim), dv.end());
        rows.push_back(r);
      }
      Probe a{"A", "sample", strings_of(src), rank(stack_rows(rows, 2 * l.w_dim)), expected};
      Probe c{"C", "sample", strings_of(t), rank(stack_rows(lf.vectors, 2 * l.w_dim)), expected};
      return std::make_pair(a, c);
    });
    for (auto& [a, c] : out) {
      probes.push_back(a);
      probes.push_back(c);
    }
  } else {
    const auto& z = *l.source_hyp;
    auto run = [&](const auto& f, const auto& pts) {
      using T = typename std::decay_t<decltype(f)>::value_type;
      const auto ss = fiber_scales(pts.size(), seed);
      auto out = parallel_map(pts.size(), [&](std::size_t i) {
        const std::vector<T>& w = pts[i];
        std::vector<Probe> ps;
        ps.push_back({"A", "sample", strings_of(w), rank_of(stratum_a_jacobian(z, w, f), f), expected});
        ps.push_back({"B", "sample", strings_of(w), rank_of(stratum_b_frame(z, w, f), f), expected});
        const auto fr = hyp_frame(z, w, f.from(ss[i]), f);
        ps.push_back({"C", "sample", strings_of(fr.params), rank_of(stack_rows(fr.vectors, 2 * l.w_dim), f), expected});
        return ps;
      });
      for (auto& ps : out) probes.insert(probes.end(), ps.begin(), ps.end());
      std::vector<std::vector<T>> drops;
      for (const auto& s : known_singular) {
        if (s.size() != z.ambient()) throw DimensionMismatch("known singular point has the wrong size");
        const auto w = convert(std::span<const Rational>(s), f);
        const std::size_t rk = rank_of(stratum_a_jacobian(z, w, f), f);
        probes.push_back({"A", "known_singular", strings_of(s), rk, expected});
        if (rk < expected) drops.push_back(normalized(w, f));
      }
      // Distinct flagged points, up to projective equivalence.
      std::vector<std::vector<T>> reps;
      for (const auto& p : drops) {
        bool found = false;
        for (const auto& q : reps) {
          std::vector<T> diff;
          for (std::size_t i = 0; i < p.size(); ++i) diff.push_back(p[i] - q[i]);
          if constexpr (std::is_same_v<T, Rational>)
            found = found || is_zero_vector(diff);
          else
            found = found || max_abs(diff) < BigFloat::pow2(-20, f.precision);
        }
        if (!found) reps.push_back(p);
      }
      clusters = reps.size();
    };
    if (cfg.backend == Backend::exact) {
      run(ExactField{}, hypersurface_points_exact(z, nsamples, seed));
    } else {
      const ApproxField f = cfg.field();
      run(f, hypersurface_points_approx(z, nsamples, seed, f));
    }
  }

  std::map<std::string, std::size_t> full, drop;
  std::size_t unexpected = 0, known_detected = 0, known_total = 0;
  Json list = Json::array();
  for (const auto& p : probes) {
    ++rep.samples_evaluated;
    ++rep.rank_histogram[p.rank];
    const bool dropped = p.rank < p.expected;
    (dropped ? drop : full)[p.stratum]++;
    if (p.origin == "known_singular") {
      ++known_total;
      if (dropped) {
        ++known_detected;
      } else {
        ++rep.rank_failures;
        rep.add_witness({p.point, "no rank drop at a known singular point"});
      }
    } else if (dropped && p.stratum != "B") {
      ++unexpected;
      ++rep.rank_failures;
      rep.add_witness({p.point, "stratum " + p.stratum + " rank " + std::to_string(p.rank) + " < " +
                                    std::to_string(p.expected)});
    }
    list.push_back(Json{{"stratum", p.stratum},
                        {"origin", p.origin},
                        {"point", p.point},
                        {"rank", p.rank},
                        {"expected", p.expected},
                        {"status", dropped ? "drop" : "full"}});
  }
  for (const char* s : {"A", "B", "C"}) {
    rep.details[std::string("stratum_") + s + "_full"] = full[s];
    rep.details[std::string("stratum_") + s + "_drops"] = drop[s];
  }
  rep.details["known_singular_total"] = known_total;
  rep.details["known_singular_detected"] = known_detected;
  rep.details["drop_clusters"] = clusters;
  rep.details["unexpected_drops"] = unexpected;
  rep.details["notes"] = notes;
  rep.details["probes"] = list;
  rep.settle();
  rep.seconds = since(t0);
  return rep;
}

}  // namespace leglab
