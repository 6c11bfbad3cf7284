#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "leglab/conormal.hpp"
#include "leglab/rng.hpp"

using namespace leglab;

namespace {

std::shared_ptr<const ParamVariety> curve(const std::string& name, std::vector<std::string> coords) {
  std::vector<MultiPoly> c;
  for (const auto& s : coords) c.push_back(parse_poly(s, {"t"}));
  return std::make_shared<const ParamVariety>(name, std::vector<std::string>{"t"}, std::move(c));
}

QVector q(std::initializer_list<long> xs) {
  QVector v;
  for (long x : xs) v.push_back(x);
  return v;
}

std::shared_ptr<const ImplicitHypersurface> plane_curve(const std::string& name, const std::string& f) {
  return std::make_shared<const ImplicitHypersurface>(name, parse_poly(f, {"x", "y", "z"}));
}

}  // namespace

TEST_CASE("conic lift point") {
  const auto l = build_conormal_lift(curve("conic", {"1", "t", "t^2"}));
  CHECK(l.codim == 1);
  CHECK(l.lift->params() == std::vector<std::string>{"t", "s"});
  CHECK(l.lift->fiber_linear() == std::vector<std::size_t>{1});
  const auto p = lift_point(l, {2, 1});
  CHECK(p.w == q({1, 2, 4}));
  CHECK(p.alpha == q({4, -4, 1}));
  const auto pt = p.point();
  CHECK(incidence_quadric_residual(std::span<const Rational>(pt)) == 0);

  const Rational t = 3;
  CHECK(torus_action_check(l, p, t));
  // (t w, alpha / t) against the lift at s / t^2, up to scale.
  const auto moved = lift_point(l, {2, Rational(1, 9)});
  CHECK(primitive(moved.point()) == primitive(std::vector<Rational>{3, 6, 12, Rational(4, 3), Rational(-4, 3), Rational(1, 3)}));
  CHECK_THROWS_AS(torus_action_check(l, p, 0), PreconditionError);

  LiftPoint<Rational> off = p;
  off.alpha[0] += 1;
  CHECK_FALSE(torus_action_check(l, off, t));
}

TEST_CASE("incidence quadric") {
  const std::vector<Rational> e{1, 0, 0, 1, 0, 0};
  CHECK(incidence_quadric_residual(std::span<const Rational>(e)) == 1);
  Rng rng(7);
  for (int it = 0; it < 20; ++it) {
    std::vector<Rational> u(6), v(6);
    for (auto& x : u) x = rng.rational(20);
    for (auto& x : v) x = rng.rational(20);
    const Rational c = rng.rational(20);
    std::vector<Rational> w(6);
    for (std::size_t i = 0; i < 6; ++i) w[i] = (i < 3 ? u[i] + c * v[i] : u[i]);
    const std::vector<Rational> vx{v[0], v[1], v[2], u[3], u[4], u[5]};
    CHECK(incidence_quadric_residual(std::span<const Rational>(w)) ==
          incidence_quadric_residual(std::span<const Rational>(u)) +
              c * incidence_quadric_residual(std::span<const Rational>(vx)));
  }
  const std::vector<Rational> odd{1, 2, 3};
  CHECK_THROWS_AS(incidence_quadric_residual(std::span<const Rational>(odd)), DimensionMismatch);
}

TEST_CASE("phi chart map") {
  CHECK(phi_chart_map(2, q({1, 2, 3, 5})) == q({5, 1, 1, 1}));
  CHECK(phi_chart_map(1, q({4, 4})) == q({0, 1}));
  CHECK(phi_chart_map(q({1, 1, 2}), q({3, 5, 1})) == q({5, 1, 1, 1}));
  CHECK(phi_chart_map(q({2, 2, 4}), q({6, 10, 2})) == q({5, 1, 1, 1}));
  CHECK_THROWS_AS(phi_chart_map(q({0, 1, 2}), q({3, 5, 1})), PreconditionError);
  CHECK_THROWS_AS(phi_chart_map(q({1, 1, 2}), q({3, 5, 0})), PreconditionError);
  CHECK_THROWS_AS(phi_chart_map(2, q({1, 2, 3})), DimensionMismatch);
}

TEST_CASE("conic lift is Legendrian") {
  const auto l = build_conormal_lift(curve("conic", {"1", "t", "t^2"}));
  const auto rep = check_conormal_lift(l, 30, 0);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rep.samples_evaluated == 30);
  CHECK(rep.details["quadric_violations"] == 0);
  CHECK(rep.details["torus_checks"] == 300);
  CHECK(rep.details["torus_failures"] == 0);
  CHECK(rep.details["fiber_jumps"] == 0);

  const auto approx = check_conormal_lift(l, 20, 0, BackendConfig{Backend::approx, 100});
  CHECK(approx.verdict == Verdict::pass);
  CHECK(approx.details["worst_quadric_exponent2"].get<long>() <= -50);
}

TEST_CASE("space curve lift uses two conormal directions") {
  const auto l = build_conormal_lift(curve("twisted_cubic", {"1", "t", "t^2", "t^3"}), 3);
  CHECK(l.codim == 2);
  CHECK(l.aux.size() == 2);
  CHECK(l.lift->param_count() == 3);
  const auto rep = check_conormal_lift(l, 20, 1);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rep.expected_rank == 4);
  CHECK(rep.details["fiber_jumps"] == 0);

  CHECK_THROWS_AS(build_conormal_lift(curve("line", {"1", "t"})), PreconditionError);
  CHECK_THROWS_AS(build_conormal_lift(curve("flat", {"1", "t^0", "1"})), PreconditionError);
}

TEST_CASE("plane curve hypersurface lifts") {
  const auto conic = build_conormal_lift(plane_curve("conic", "x*z - y^2"));
  CHECK_FALSE(conic.is_param());
  const auto p = lift_point(conic, {1, 2, 4, 1});
  CHECK(primitive(p.alpha) == primitive(q({4, -4, 1})));
  CHECK(check_conormal_lift(conic, 20, 0).verdict == Verdict::pass);

  const auto nodal = build_conormal_lift(plane_curve("nodal_cubic", "z*y^2 - x^3 - x^2*z"));
  const auto np = lift_point(nodal, {3, 6, 1, 1});
  CHECK(np.alpha == q({-33, 12, 27}));
  CHECK(check_conormal_lift(nodal, 20, 0).verdict == Verdict::pass);
  CHECK_THROWS_AS(lift_point(nodal, {0, 0, 1, 1}), PreconditionError);
}

TEST_CASE("reduction agrees with the chart map") {
  const auto l = build_conormal_lift(curve("conic", {"1", "t", "t^2"}));
  const auto rep = reduction_agreement_check(l, 20, 0);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rep.details["agreements"].get<int>() >= 20);
  CHECK(rep.details["mismatches"] == 0);

  const auto neg = reduction_agreement_check(l, 20, 0, true);
  CHECK(neg.verdict == Verdict::fail);
  CHECK(neg.witness_count >= 1);

  const auto space = build_conormal_lift(curve("twisted_cubic", {"1", "t", "t^2", "t^3"}), 3);
  CHECK(reduction_agreement_check(space, 10, 0).verdict == Verdict::pass);
}

TEST_CASE("singularity strata") {
  const auto conic = build_conormal_lift(plane_curve("conic", "x*z - y^2"));
  const auto c = singularity_classification_probe(conic, 20, 0);
  CHECK(c.verdict == Verdict::pass);
  for (const char* s : {"stratum_A_drops", "stratum_B_drops", "stratum_C_drops"}) CHECK(c.details[s] == 0);

  const auto nodal = build_conormal_lift(plane_curve("nodal_cubic", "z*y^2 - x^3 - x^2*z"));
  const auto n = singularity_classification_probe(nodal, 20, 0, {q({0, 0, 1})});
  CHECK(n.verdict == Verdict::pass);
  CHECK(n.details["known_singular_detected"] == 1);
  CHECK(n.details["stratum_A_drops"] == 1);
  CHECK(n.details["unexpected_drops"] == 0);
  CHECK(n.details["drop_clusters"] == 1);

  // A smooth point claimed singular is a failure.
  const auto wrong = singularity_classification_probe(nodal, 5, 0, {q({0, 1, 0})});
  CHECK(wrong.verdict == Verdict::fail);

  const auto param = build_conormal_lift(curve("conic", {"1", "t", "t^2"}));
  const auto pr = singularity_classification_probe(param, 10, 0);
  CHECK(pr.verdict == Verdict::pass);
  CHECK(pr.details["stratum_B_full"] == 0);
}
