#include "leglab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "leglab/dsl.hpp"
#include "leglab/parallel.hpp"
#include "leglab/rng.hpp"

namespace leglab {

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct RunConfig {
  std::string command;
  std::string catalog, dsl;
  std::string backend = "exact";
  long precision = 128;
  std::uint64_t seed = 0;
  std::size_t samples = 50;
  std::string output;
  std::string format = "json";
  unsigned threads = 0;
  std::string form;
  std::size_t codim = 1;
  std::string hyperplane;
  std::size_t pairs = 100;
  bool permute = false;
  std::string action, target;

  BackendConfig backend_config() const {
    return {backend == "approx" ? Backend::approx : Backend::exact, precision};
  }
};

struct Source {
  VarietySpec spec;
  std::optional<CatalogEntry> entry;
};

Source load_source(const RunConfig& c) {
  if (c.catalog.empty() == c.dsl.empty()) throw UsageError("give exactly one of --catalog and --dsl");
  Source s;
  if (!c.catalog.empty()) {
    s.entry = catalog_build(c.catalog);
    s.spec = spec_from_entry(*s.entry);
  } else {
    s.spec = load_dsl(c.dsl);
  }
  return s;
}

const ParamVariety& param_variety(const Source& s, const std::string& command) {
  if (!s.spec.variety) throw UsageError(command + " needs a parametrized variety");
  return *s.spec.variety;
}

SymplecticForm resolve_form(const Source& s, const std::string& override_mode) {
  const auto& x = *s.spec.variety;
  FormMode mode = s.spec.form;
  if (override_mode == "standard") mode = FormMode::standard;
  if (override_mode == "fit") mode = FormMode::fit;
  switch (mode) {
    case FormMode::standard:
      if (x.ambient() % 2) throw UsageError("standard form needs an even ambient dimension");
      return SymplecticForm::standard(x.ambient() / 2);
    case FormMode::explicit_matrix:
      return SymplecticForm(*s.spec.explicit_form);
    case FormMode::fit:
    case FormMode::unspecified:
      break;
  }
  if (s.entry) return entry_form(*s.entry);
  const auto fit = fitted_form_family(x);
  if (fit.basis.size() != 1 || !fit.nondegenerate)
    throw Error("no unique nondegenerate fitted form (family dimension " + std::to_string(fit.basis.size()) + ")");
  return SymplecticForm(fit.basis[0]);
}

ConormalLift lift_of(const Source& s, std::uint64_t seed) {
  if (s.spec.is_hypersurface()) return build_conormal_lift(s.spec.hypersurface);
  if (s.entry && s.entry->conormal_source) return build_conormal_lift(s.entry->conormal_source, seed);
  return build_conormal_lift(s.spec.variety, seed);
}

Report combine(const std::string& kind, const std::vector<std::pair<std::string, Report>>& parts) {
  Report rep = parts.front().second;
  rep.kind = kind;
  rep.samples_evaluated = 0;
  rep.rank_histogram.clear();
  rep.isotropy_violations = rep.rank_failures = 0;
  rep.witnesses.clear();
  rep.witness_count = 0;
  rep.details = Json::object();
  rep.seconds = 0;
  bool fail = false, inconclusive = false;
  for (const auto& [name, r] : parts) {
    rep.samples_evaluated += r.samples_evaluated;
    rep.isotropy_violations += r.isotropy_violations;
    rep.rank_failures += r.rank_failures;
    rep.seconds += r.seconds;
    for (const auto& w : r.witnesses)
      if (rep.witnesses.size() < 10) rep.witnesses.push_back({w.params, name + ": " + w.detail});
    rep.witness_count += r.witness_count;
    rep.details[name] = report_json(r);
    fail = fail || r.verdict == Verdict::fail;
    inconclusive = inconclusive || r.verdict == Verdict::inconclusive;
  }
  rep.verdict = fail ? Verdict::fail : inconclusive ? Verdict::inconclusive : Verdict::pass;
  return rep;
}

std::vector<std::string> matrix_strings(const QMatrix& m) {
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::string r;
    for (std::size_t j = 0; j < m.cols(); ++j) r += (j ? " " : "") + rational_string(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

Report cmd_verify(const RunConfig& c) {
  const Source s = load_source(c);
  if (s.spec.is_hypersurface()) return check_conormal_lift(lift_of(s, c.seed), c.samples, c.seed, c.backend_config());
  const auto& x = param_variety(s, "verify");
  return check_legendrian(x, resolve_form(s, c.form), c.samples, c.seed, c.backend_config());
}

Report cmd_fit(const RunConfig& c) {
  const Source s = load_source(c);
  const auto& x = param_variety(s, "fit-form");
  const auto fit = fitted_form_family(x, c.seed);
  Report rep;
  rep.kind = "fit_form";
  rep.variety = x.name();
  rep.seed = c.seed;
  rep.ambient = x.ambient();
  rep.samples_requested = 3 * fit.unknowns;
  rep.samples_evaluated = fit.equations;
  rep.details["unknowns"] = fit.unknowns;
  rep.details["equations"] = fit.equations;
  rep.details["dimension"] = fit.basis.size();
  rep.details["nondegenerate"] = fit.nondegenerate;
  Json basis = Json::array();
  for (const auto& m : fit.basis) basis.push_back(matrix_strings(m));
  rep.details["basis"] = basis;
  if (fit.basis.size() != 1) rep.add_witness({{}, "solution space has dimension " + std::to_string(fit.basis.size())});
  if (fit.degenerate_family()) rep.add_witness({{}, "every tested element is degenerate"});
  rep.settle();
  return rep;
}

QVector parse_vector(const std::string& s) {
  QVector v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(parse_rational(item.substr(item.find_first_not_of(' '))));
    } catch (const std::exception&) {
      throw UsageError("bad hyperplane entry '" + item + "'");
    }
  }
  return v;
}

Report cmd_reduce(const RunConfig& c) {
  const Source s = load_source(c);
  const auto& x = param_variety(s, "reduce");
  const auto form = resolve_form(s, c.form);
  auto xp = s.spec.variety;
  ReducedVariety r;
  if (!c.hyperplane.empty()) {
    if (c.codim != 1) throw UsageError("--hyperplane needs --codim 1");
    const QVector a = parse_vector(c.hyperplane);
    if (a.size() != x.ambient()) throw UsageError("hyperplane has the wrong length");
    r = hyperplane_reduce(xp, form, a, c.seed);
  } else {
    r = coisotropic_reduce(xp, form, c.codim, c.seed);
  }
  const BackendConfig cfg = c.backend_config();
  std::vector<std::pair<std::string, Report>> parts{{"reduction", verify_reduction(r, c.samples, c.seed, cfg)}};
  if (cfg.backend == Backend::exact && r.strategy != SectionStrategy::newton) {
    parts.emplace_back("secant_probe", secant_avoidance_probe(r, c.pairs, c.seed));
  }
  Report rep = combine("reduce", parts);
  const auto w = witness_nonisotropic_pair(x, form, 100, c.seed);
  rep.details["nonisotropic_witness_found"] = w.has_value();
  if (w) {
    std::vector<std::string> a, b;
    for (const auto& v : w->first) a.push_back(rational_string(v));
    for (const auto& v : w->second) b.push_back(rational_string(v));
    rep.details["nonisotropic_witness"] = Json{a, b};
  }
  if (parts.size() == 1) rep.details["secant_probe_skipped"] = "needs exact section points";
  return rep;
}

Report cmd_extend(const RunConfig& c) {
  const Source s = load_source(c);
  const auto l = lift_of(s, c.seed);
  const BackendConfig cfg = c.backend_config();
  std::vector<std::pair<std::string, Report>> parts;
  parts.emplace_back("lift", check_conormal_lift(l, c.samples, c.seed, cfg));
  parts.emplace_back("strata", singularity_classification_probe(l, c.samples, c.seed, s.spec.nodes, cfg));
  if (l.is_param() && cfg.backend == Backend::exact)
    parts.emplace_back("agreement", reduction_agreement_check(l, c.samples, c.seed));
  Report rep = combine("extend", parts);
  rep.variety = l.name;
  if (parts.size() == 2) rep.details["agreement_skipped"] = "needs a parametrized source and the exact backend";
  return rep;
}

Report cmd_agree(const RunConfig& c) {
  const Source s = load_source(c);
  if (c.backend != "exact") throw UsageError("agree runs on the exact backend");
  return reduction_agreement_check(lift_of(s, c.seed), c.samples, c.seed, c.permute);
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << "\n";
    return;
  }
  std::ofstream f(c.output);
  if (!f) throw Error("cannot write " + c.output);
  f << text;
  if (!text.empty() && text.back() != '\n') f << "\n";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return 0;
    case Verdict::fail: return 1;
    case Verdict::inconclusive: return 2;
  }
  return 2;
}

int cmd_catalog(const RunConfig& c, std::ostream& out) {
  if (c.action == "list") {
    if (c.format == "json") {
      Json j{{"schema", 1}, {"kind", "catalog_list"}, {"entries", catalog_names()}};
      emit(c, j.dump(), out);
    } else {
      std::string t;
      for (const auto& n : catalog_names()) t += n + "\n";
      emit(c, t, out);
    }
    return 0;
  }
  if (c.target.empty()) throw UsageError("catalog " + c.action + " needs an entry name");
  const auto e = catalog_build(c.target);
  if (c.action == "build") {
    emit(c, export_dsl(spec_from_entry(e)), out);
    return 0;
  }
  const auto rep = self_check(e, c.samples, c.seed);
  emit(c, render_report(rep, c.format), out);
  return exit_code(rep.verdict);
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--catalog", c.catalog, "Catalog entry, e.g. twisted_cubic or p1xQ(3)");
  sub->add_option("--dsl", c.dsl, "Variety definition file");
  sub->add_option("--backend", c.backend)->check(CLI::IsMember({"exact", "approx"}));
  sub->add_option("--precision", c.precision, "Bits for the approx backend")->check(CLI::Range(16L, 100000L));
  sub->add_option("--seed", c.seed);
  sub->add_option("--samples", c.samples)->check(CLI::PositiveNumber);
  sub->add_option("--output", c.output, "Write the report here instead of stdout");
  sub->add_option("--format", c.format)->check(CLI::IsMember({"json", "text"}));
  sub->add_option("--threads", c.threads, "Worker threads (default: LEGLAB_THREADS or hardware)");
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Construct and verify Legendrian varieties", "leglab"};
  app.require_subcommand(1);
  auto* verify = app.add_subcommand("verify", "Legendrian check with the attached or fitted form");
  auto* fit = app.add_subcommand("fit-form", "Fit the symplectic forms making a variety isotropic");
  auto* reduce = app.add_subcommand("reduce", "Hyperplane or coisotropic reduction with verification");
  auto* extend = app.add_subcommand("extend", "Conormal lift and its probe suite");
  auto* agree = app.add_subcommand("agree", "Reduction of the lift against the chart map");
  auto* catalog = app.add_subcommand("catalog", "List, export or self-check catalog entries");
  for (auto* sub : {verify, fit, reduce, extend, agree, catalog}) add_common(sub, c);
  for (auto* sub : {verify, reduce}) sub->add_option("--form", c.form)->check(CLI::IsMember({"standard", "fit"}));
  reduce->add_option("--codim", c.codim, "Number of reduction stages")->check(CLI::PositiveNumber);
  reduce->add_option("--hyperplane", c.hyperplane, "Covector a as comma-separated rationals");
  reduce->add_option("--pairs", c.pairs, "Secant probe pairs")->check(CLI::PositiveNumber);
  agree->add_flag("--permute", c.permute, "Swap two target coordinates (negative control)");
  catalog->add_option("action", c.action)->required()->check(CLI::IsMember({"list", "build", "self-check"}));
  catalog->add_option("name", c.target);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  unsigned threads = c.threads;
  if (threads == 0)
    if (const char* env = std::getenv("LEGLAB_THREADS")) threads = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  set_thread_count(threads);

  try {
    if (catalog->parsed()) return cmd_catalog(c, out);
    Report rep;
    if (verify->parsed()) rep = cmd_verify(c);
    if (fit->parsed()) rep = cmd_fit(c);
    if (reduce->parsed()) rep = cmd_reduce(c);
    if (extend->parsed()) rep = cmd_extend(c);
    if (agree->parsed()) rep = cmd_agree(c);
    emit(c, render_report(rep, c.format), out);
    return exit_code(rep.verdict);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace leglab
