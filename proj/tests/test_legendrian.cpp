#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "leglab/conormal.hpp"
#include "leglab/legendrian.hpp"

using namespace leglab;

namespace {

std::shared_ptr<const ParamVariety> curve(const std::string& name, std::vector<std::string> coords) {
  std::vector<MultiPoly> c;
  for (const auto& s : coords) c.push_back(parse_poly(s, {"t"}));
  return std::make_shared<const ParamVariety>(name, std::vector<std::string>{"t"}, std::move(c));
}

SymplecticForm cubic_form() {
  QMatrix m(4, 4);
  m(0, 3) = 1;
  m(3, 0) = -1;
  m(1, 2) = -3;
  m(2, 1) = 3;
  return SymplecticForm(m);
}

QVector q(std::initializer_list<long> xs) {
  QVector v;
  for (long x : xs) v.push_back(x);
  return v;
}

std::shared_ptr<const ParamVariety> conic_lift() {
  return build_conormal_lift(curve("conic", {"1", "t", "t^2"})).lift;
}

}  // namespace

TEST_CASE("twisted cubic against fitted and standard forms") {
  const auto x = curve("twisted_cubic", {"1", "t", "t^2", "t^3"});
  const auto good = check_legendrian(*x, cubic_form(), 50, 0);
  CHECK(good.verdict == Verdict::pass);
  CHECK(good.samples_evaluated == 50);
  CHECK(good.isotropy_violations == 0);
  CHECK(good.rank_histogram.at(2) == 50);

  const auto bad = check_legendrian(*x, SymplecticForm::standard(2), 50, 0);
  CHECK(bad.verdict == Verdict::fail);
  CHECK(bad.witness_count >= 1);
  CHECK_FALSE(bad.witnesses.empty());

  CHECK_THROWS_AS(check_legendrian(*x, SymplecticForm::standard(3), 5, 0), DimensionMismatch);
}

TEST_CASE("twisted cubic approximate backend") {
  const auto x = curve("twisted_cubic", {"1", "t", "t^2", "t^3"});
  BackendConfig cfg{Backend::approx, 96};
  const auto good = check_legendrian(*x, cubic_form(), 20, 3, cfg);
  CHECK(good.verdict == Verdict::pass);
  REQUIRE(good.worst_residual.has_value());
  const auto bad = check_legendrian(*x, SymplecticForm::standard(2), 20, 3, cfg);
  CHECK(bad.verdict == Verdict::fail);
}

TEST_CASE("nonisotropic witness") {
  const auto x = curve("twisted_cubic", {"1", "t", "t^2", "t^3"});
  const auto w = witness_nonisotropic_pair(*x, cubic_form(), 100, 0);
  REQUIRE(w.has_value());
  CHECK(w->first == std::vector<Rational>{0});
  CHECK(w->second == std::vector<Rational>{1});
  CHECK(omega_eval(cubic_form(), x->point(std::span<const Rational>(w->first), ExactField{}),
                   x->point(std::span<const Rational>(w->second), ExactField{})) == 1);
  const auto again = witness_nonisotropic_pair(*x, cubic_form(), 100, 0);
  CHECK(again == w);

  const std::vector<std::string> ab{"a", "b"};
  const ParamVariety plane("lagrangian_plane", ab,
                           {parse_poly("1", ab), parse_poly("a", ab), parse_poly("b", ab), parse_poly("0", ab),
                            parse_poly("0", ab), parse_poly("0", ab)});
  CHECK_FALSE(witness_nonisotropic_pair(plane, SymplecticForm::standard(3), 100, 0).has_value());
  CHECK(check_legendrian(plane, SymplecticForm::standard(3), 20, 0).verdict == Verdict::pass);
}

TEST_CASE("hyperplane reduction of the conic lift") {
  const auto x = conic_lift();
  const auto form = SymplecticForm::standard(3);
  const QVector a = q({2, -1, 3, 1, 5, -2});
  const auto r = hyperplane_reduce(x, form, a, 0);
  CHECK(r.depth() == 1);
  CHECK(r.ambient() == 4);
  CHECK(r.omega_prime().rows() == 4);
  CHECK(r.strategy == SectionStrategy::fiber_linear);
  CHECK(r.dimension() == 1);
  const auto& chart = r.stages[0].chart;
  CHECK(is_zero_vector(chart.q * chart.hyperplane.h));

  const auto samples = section_samples_exact(r, 20, 1);
  CHECK(samples.size() == 20);
  for (const auto& s : samples) CHECK(sgn(dot<Rational>(a, s.point)) == 0);

  const auto rep = verify_reduction(r, 30, 2);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rep.details["dimension_drop"] == 1);
  CHECK(rep.details["reduced_ambient_dim"] == 4);
  CHECK(rep.details["source_ambient_dim"] == 6);

  const auto bad = verify_reduction(r, 30, 2, {}, corrupt_form(r.omega_prime()));
  CHECK(bad.verdict == Verdict::fail);
  CHECK(bad.witness_count >= 1);

  const auto approx = verify_reduction(r, 10, 2, BackendConfig{Backend::approx, 100});
  CHECK(approx.verdict == Verdict::pass);

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto probe = secant_avoidance_probe(r, 100, seed);
    CHECK(probe.details["hits"] == 0);
    CHECK(probe.details["pairs_tested"] == 100);
  }
  CHECK_THROWS_AS(hyperplane_reduce(x, form, QVector(6), 0), PreconditionError);
}

TEST_CASE("secant probe negative control") {
  const auto x = conic_lift();
  const auto form = SymplecticForm::standard(3);
  // Two points on one conormal line; h is on their secant.
  const std::vector<Rational> p1{2, 1}, p2{2, 3};
  const auto x1 = x->point(std::span<const Rational>(p1), ExactField{});
  const auto x2 = x->point(std::span<const Rational>(p2), ExactField{});
  QVector h(6);
  for (std::size_t i = 0; i < 6; ++i) h[i] = x1[i] + x2[i];
  const QVector a = form.matrix() * h;
  const auto r = hyperplane_reduce(x, form, a, 0);
  CHECK(primitive(r.stages[0].chart.hyperplane.h) == primitive(h));
  const auto probe = secant_avoidance_probe(r, 20, 0, {x1, x2});
  CHECK(probe.details["hits"].get<int>() >= 1);
  CHECK(probe.details["injective_on_samples"] == false);
}

TEST_CASE("coisotropic reduction ancestry") {
  const auto x = conic_lift();
  const auto r1 = coisotropic_reduce(x, SymplecticForm::standard(3), 1, 4);
  CHECK(r1.depth() == 1);
  CHECK(r1.ambient() == 4);
  const auto r2 = coisotropic_reduce(x, SymplecticForm::standard(3), 2, 4);
  CHECK(r2.depth() == 2);
  CHECK(r2.ambient() == 2);
  CHECK(r2.constraints.rows() == 2);
  CHECK_THROWS_AS(coisotropic_reduce(x, SymplecticForm::standard(3), 3, 4), PreconditionError);
  CHECK_THROWS_AS(coisotropic_reduce(x, SymplecticForm::standard(3), 0, 4), PreconditionError);
}

TEST_CASE("twisted cubic section is finite") {
  const auto x = curve("twisted_cubic", {"1", "t", "t^2", "t^3"});
  const auto r = hyperplane_reduce(x, cubic_form(), q({0, -6, 11, -6}), 0);
  CHECK(r.dimension() == 0);
  const auto pts = section_samples_exact(r, 10, 0);
  CHECK(pts.size() <= 3);
  for (const auto& s : pts) CHECK(sgn(dot<Rational>(q({0, -6, 11, -6}), s.point)) == 0);
}

TEST_CASE("reports are deterministic") {
  const auto x = conic_lift();
  const auto r = hyperplane_reduce(x, SymplecticForm::standard(3), q({1, 1, -2, 3, 0, 1}), 5);
  CHECK(render_report(verify_reduction(r, 15, 9), "json") == render_report(verify_reduction(r, 15, 9), "json"));
}
