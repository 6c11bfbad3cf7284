#include "leglab/catalog.hpp"

#include <chrono>
#include <mutex>
#include <regex>

#include "leglab/rng.hpp"

namespace leglab {

namespace {

std::vector<std::string> indexed(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

MultiPoly det3(const std::vector<std::vector<MultiPoly>>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Pfaffian by expansion along the first row.
MultiPoly pfaffian(const std::vector<std::vector<MultiPoly>>& a, const std::vector<std::size_t>& idx,
                   const std::vector<std::string>& vars) {
  if (idx.empty()) return MultiPoly::constant(vars, 1);
  MultiPoly acc(vars);
  for (std::size_t j = 1; j < idx.size(); ++j) {
    std::vector<std::size_t> rest;
    for (std::size_t k = 1; k < idx.size(); ++k)
      if (k != j) rest.push_back(idx[k]);
    const MultiPoly t = a[idx[0]][idx[j]] * pfaffian(a, rest, vars);
    if (j % 2)
      acc += t;
    else
      acc -= t;
  }
  return acc;
}

CatalogEntry from_cubic(const std::string& name, const std::string& family, const MultiPoly& n) {
  CatalogEntry e;
  e.name = name;
  e.family = family;
  e.builder_params = {{"cubic", n.to_string()}};
  e.variety = std::make_shared<const ParamVariety>(cubic_form_variety(name, n));
  e.expected_dimension = static_cast<int>(n.vars().size());
  e.expected_ambient = 2 * n.vars().size() + 2;
  return e;
}

CatalogEntry gr36() {
  std::vector<std::string> vars;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) vars.push_back("a" + std::to_string(i) + std::to_string(j));
  std::vector<std::vector<MultiPoly>> m(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i].push_back(MultiPoly::variable(vars, vars[3 * i + j]));
  return from_cubic("gr36", "cubic_form", det3(m));
}

CatalogEntry lg36() {
  const std::vector<std::string> vars{"s11", "s12", "s13", "s22", "s23", "s33"};
  auto v = [&](int i, int j) {
    if (i > j) std::swap(i, j);
    return MultiPoly::variable(vars, "s" + std::to_string(i) + std::to_string(j));
  };
  std::vector<std::vector<MultiPoly>> m(3);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) m[i - 1].push_back(v(i, j));
  return from_cubic("lg36", "cubic_form", det3(m));
}

CatalogEntry spinor6() {
  std::vector<std::string> vars;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) vars.push_back("p" + std::to_string(i) + std::to_string(j));
  std::vector<std::vector<MultiPoly>> a(6, std::vector<MultiPoly>(6, MultiPoly(vars)));
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      a[i][j] = MultiPoly::variable(vars, "p" + std::to_string(i) + std::to_string(j));
      a[j][i] = -a[i][j];
    }
  return from_cubic("spinor6", "cubic_form", pfaffian(a, {0, 1, 2, 3, 4, 5}, vars));
}

CatalogEntry p1xq(std::size_t m) {
  std::vector<std::string> vars{"t0"};
  for (const auto& x : indexed("x", m)) vars.push_back(x);
  MultiPoly q(vars);
  for (std::size_t i = 1; i <= m; ++i) q += MultiPoly::variable(vars, vars[i]).pow(2);
  auto e = from_cubic("p1xQ(" + std::to_string(m) + ")", "p1xQ", MultiPoly::variable(vars, "t0") * q);
  e.builder_params.insert(e.builder_params.begin(), {"m", std::to_string(m)});
  return e;
}

CatalogEntry twisted_cubic() {
  CatalogEntry e;
  e.name = e.family = "twisted_cubic";
  const std::vector<std::string> t{"t"};
  e.variety = std::make_shared<const ParamVariety>(
      "twisted_cubic", t,
      std::vector<MultiPoly>{parse_poly("1", t), parse_poly("t", t), parse_poly("t^2", t), parse_poly("t^3", t)});
  e.expected_dimension = 1;
  e.expected_ambient = 4;
  return e;
}

CatalogEntry conic_conormal() {
  CatalogEntry e;
  e.name = "conic_conormal_demo";
  e.family = "conormal";
  const std::vector<std::string> t{"t"};
  auto conic = std::make_shared<const ParamVariety>(
      "conic", t, std::vector<MultiPoly>{parse_poly("1", t), parse_poly("t", t), parse_poly("t^2", t)});
  const auto lift = build_conormal_lift(conic).lift;
  e.conormal_source = conic;
  std::vector<std::string> fiber;
  for (auto i : lift->fiber_linear()) fiber.push_back(lift->params()[i]);
  e.variety = std::make_shared<const ParamVariety>(e.name, lift->params(), lift->coords(), fiber);
  e.builder_params = {{"source", "1, t, t^2"}};
  e.expected_dimension = 2;
  e.expected_ambient = 6;
  return e;
}

CatalogEntry hypersurface(const std::string& name, const std::vector<std::string>& vars, const std::string& f) {
  CatalogEntry e;
  e.name = name;
  e.family = "hypersurface";
  e.hypersurface = std::make_shared<const ImplicitHypersurface>(name, parse_poly(f, vars));
  e.builder_params = {{"equation", e.hypersurface->equation().to_string()}};
  e.attached_form = SymplecticForm::standard(vars.size());
  e.expected_dimension = static_cast<int>(vars.size()) - 2;
  e.expected_ambient = vars.size();
  return e;
}

CatalogEntry nodal_cubic() {
  auto e = hypersurface("nodal_cubic", {"x", "y", "z"}, "z*y^2 - x^3 - x^2*z");
  e.known_singular = {QVector{0, 0, 1}};
  return e;
}

// Member of the classical tetrahedroid family
//   x^4+y^4+z^4+t^4 + A(x^2t^2+y^2z^2) + B(y^2t^2+x^2z^2) + C(z^2t^2+x^2y^2) + D xyzt
// through the node (1, 2, 3, 5), scaled to integer coefficients.
CatalogEntry kummer() {
  auto e = hypersurface("kummer", {"x", "y", "z", "t"},
                        "1309*t^4 + 62951*t^2*x^2 - 8041*t^2*y^2 - 4081*t^2*z^2 - 99180*t*x*y*z + 1309*x^4 "
                        "- 4081*x^2*y^2 - 8041*x^2*z^2 + 1309*y^4 + 62951*y^2*z^2 + 1309*z^4");
  e.builder_params.insert(e.builder_params.begin(),
                          {{"A", "529/11"}, {"B", "-43/7"}, {"C", "-53/17"}, {"D", "-49590/1309"}});
  const long nodes[16][4] = {{1, -2, -3, 5}, {1, -2, 3, -5}, {1, 2, -3, -5}, {1, 2, 3, 5},
                             {2, -1, -5, 3}, {2, -1, 5, -3}, {2, 1, -5, -3}, {2, 1, 5, 3},
                             {3, -5, -1, 2}, {3, -5, 1, -2}, {3, 5, -1, -2}, {3, 5, 1, 2},
                             {5, -3, -2, 1}, {5, -3, 2, -1}, {5, 3, -2, -1}, {5, 3, 2, 1}};
  for (const auto& n : nodes) e.known_singular.push_back(QVector{n[0], n[1], n[2], n[3]});
  e.recommended_backend = Backend::approx;
  return e;
}

}  // namespace

ParamVariety cubic_form_variety(const std::string& name, const MultiPoly& n) {
  if (n.is_zero() || !n.is_homogeneous() || n.total_degree() != 3)
    throw PreconditionError("cubic form recipe: N must be a homogeneous cubic");
  const auto& vars = n.vars();
  std::vector<MultiPoly> coords{MultiPoly::constant(vars, 1)};
  for (const auto& v : vars) coords.push_back(MultiPoly::variable(vars, v));
  for (std::size_t i = 0; i < vars.size(); ++i) coords.push_back(partial(n, i));
  coords.push_back(n);
  return ParamVariety(name, vars, std::move(coords));
}

std::vector<std::string> catalog_names() {
  return {"twisted_cubic", "p1xQ(m)", "gr36", "lg36", "spinor6", "conic_conormal_demo", "nodal_cubic", "kummer"};
}

CatalogEntry catalog_build(const std::string& name) {
  if (name == "twisted_cubic") return twisted_cubic();
  if (name == "gr36") return gr36();
  if (name == "lg36") return lg36();
  if (name == "spinor6") return spinor6();
  if (name == "conic_conormal_demo") return conic_conormal();
  if (name == "nodal_cubic") return nodal_cubic();
  if (name == "kummer" || name == "kummer()") return kummer();
  static const std::regex p1xq_re(R"(p1xQ\((\d{1,3})\))");
  std::smatch m;
  if (std::regex_match(name, m, p1xq_re)) {
    const int k = std::stoi(m[1]);
    if (k < 1) throw CatalogError("p1xQ(m) needs m >= 1");
    return p1xq(static_cast<std::size_t>(k));
  }
  if (name.rfind("kummer(", 0) == 0) throw CatalogError("kummer: only the built-in instance is available");
  throw CatalogError("unknown catalog entry: " + name);
}

FitResult fitted_form_family(const ParamVariety& x, std::uint64_t seed) {
  std::string key = x.name() + "|" + std::to_string(seed);
  for (const auto& c : x.coords()) key += "|" + c.to_string();
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const FitResult>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;
  }
  const std::size_t d = x.ambient();
  const std::size_t unknowns = d * (d - 1) / 2;
  const std::size_t m = x.param_count();
  const std::size_t per_frame = std::max<std::size_t>(1, (m + 1) * m / 2);
  const std::size_t nframes = (3 * unknowns + per_frame - 1) / per_frame;
  std::vector<std::vector<QVector>> frames;
  for (const auto& t : sample_points(x, nframes, mix_seed(seed, 0xf17)))
    frames.push_back(x.frame(std::span<const Rational>(t), ExactField{}).vectors);
  auto fit = std::make_shared<const FitResult>(fit_symplectic_form(frames, seed));
  std::lock_guard<std::mutex> lock(mu);
  return *cache.emplace(key, fit).first->second;
}

SymplecticForm entry_form(const CatalogEntry& e) {
  if (e.attached_form) return *e.attached_form;
  const auto fit = fitted_form_family(*e.variety);
  if (fit.basis.size() != 1)
    throw CatalogError(e.name + ": fitted form family has dimension " + std::to_string(fit.basis.size()));
  if (!fit.nondegenerate) throw CatalogError(e.name + ": fitted form is degenerate");
  return SymplecticForm(fit.basis[0]);
}

Report self_check(const CatalogEntry& e, std::size_t nsamples, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  Report rep;
  if (e.is_hypersurface()) {
    const auto& z = *e.hypersurface;
    std::size_t bad_nodes = 0;
    std::vector<Witness> node_witnesses;
    for (const auto& p : e.known_singular) {
      const auto g = z.gradient(std::span<const Rational>(p), ExactField{});
      if (sgn(z.value(std::span<const Rational>(p), ExactField{})) != 0 || !is_zero_vector(g)) {
        ++bad_nodes;
        std::vector<std::string> s;
        for (const auto& x : p) s.push_back(rational_string(x));
        node_witnesses.push_back({s, "listed node is not a singular point"});
      }
    }
    BackendConfig cfg{e.recommended_backend, 128};
    rep = check_conormal_lift(build_conormal_lift(e.hypersurface), nsamples, seed, cfg);
    for (auto& w : node_witnesses) rep.add_witness(std::move(w));
    rep.details["nodes_listed"] = e.known_singular.size();
    rep.details["nodes_failed"] = bad_nodes;
  } else {
    const auto& x = *e.variety;
    if (x.ambient() != e.expected_ambient) throw CatalogError(e.name + ": unexpected coordinate count");
    const auto fit = fitted_form_family(x);
    const bool ok = fit.basis.size() == 1 && fit.nondegenerate;
    if (ok) {
      rep = check_legendrian(x, SymplecticForm(fit.basis[0]), nsamples, seed);
    } else {
      rep.variety = x.name();
      rep.seed = seed;
      rep.samples_requested = nsamples;
      rep.ambient = x.ambient();
      rep.add_witness({{}, "fitted form family has dimension " + std::to_string(fit.basis.size()) +
                               (fit.degenerate_family() ? " and is degenerate" : "")});
    }
    rep.details["fit_dimension"] = fit.basis.size();
    rep.details["fit_nondegenerate"] = fit.nondegenerate;
    rep.details["fit_unknowns"] = fit.unknowns;
    rep.details["fit_equations"] = fit.equations;
    if (!rep.rank_histogram.empty()) {
      const int dim = static_cast<int>(rep.rank_histogram.rbegin()->first) - 1;
      rep.details["dimension"] = dim;
      if (dim != e.expected_dimension) rep.add_witness({{}, "dimension " + std::to_string(dim) + " differs from the expected " + std::to_string(e.expected_dimension)});
    }
  }
  rep.kind = "self_check";
  rep.details["expected_dimension"] = e.expected_dimension;
  rep.details["expected_ambient"] = e.expected_ambient;
  rep.settle();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

CatalogEntry catalog_get(const std::string& name) {
  CatalogEntry e = catalog_build(name);
  static std::mutex mu;
  static std::map<std::string, bool> served;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = served.find(e.name); it != served.end()) {
      if (!it->second) throw CatalogError(e.name + ": self-check failed");
      return e;
    }
  }
  const bool ok = self_check(e).verdict == Verdict::pass;
  {
    std::lock_guard<std::mutex> lock(mu);
    served[e.name] = ok;
  }
  if (!ok) throw CatalogError(e.name + ": self-check failed");
  return e;
}

}  // namespace leglab
