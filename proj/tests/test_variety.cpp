#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "leglab/parallel.hpp"
#include "leglab/variety.hpp"

using namespace leglab;

namespace {

ParamVariety curve(const std::string& name, std::vector<std::string> coords) {
  std::vector<MultiPoly> c;
  for (const auto& s : coords) c.push_back(parse_poly(s, {"t"}));
  return ParamVariety(name, {"t"}, std::move(c));
}

ParamVariety twisted_cubic() { return curve("twisted_cubic", {"1", "t", "t^2", "t^3"}); }

QVector q(std::initializer_list<long> xs) {
  QVector v;
  for (long x : xs) v.push_back(x);
  return v;
}

}  // namespace

TEST_CASE("cone tangent frame") {
  const auto x = twisted_cubic();
  const std::vector<Rational> t{2};
  const auto fr = cone_tangent_frame(x, t);
  REQUIRE(fr.vectors.size() == 2);
  CHECK(fr.vectors[0] == q({1, 2, 4, 8}));
  CHECK(fr.vectors[1] == q({0, 1, 4, 12}));

  const auto base = curve("line", {"t", "t^2", "0", "t"});
  const std::vector<Rational> zero{0};
  CHECK_THROWS_AS(cone_tangent_frame(base, zero), PreconditionError);
  CHECK_THROWS_AS(jacobian_rank_at(base, zero), PreconditionError);

  const ParamVariety surf("surf", {"a", "b"}, {parse_poly("a", {"a", "b"}), parse_poly("b", {"a", "b"}), parse_poly("a*b + 1", {"a", "b"})});
  const std::vector<Rational> ab{3, 4};
  CHECK(cone_tangent_frame(surf, ab).vectors.size() == 3);
}

TEST_CASE("frames are 1-homogeneous") {
  const auto x = twisted_cubic();
  const auto y = curve("scaled", {"5", "5*t", "5*t^2", "5*t^3"});
  for (long t = -3; t <= 3; ++t) {
    const std::vector<Rational> tt{t};
    auto a = cone_tangent_frame(x, tt).vectors;
    const auto b = cone_tangent_frame(y, tt).vectors;
    auto all = a;
    all.insert(all.end(), b.begin(), b.end());
    CHECK(rank(stack_rows(all, 4)) == rank(stack_rows(a, 4)));
  }
}

TEST_CASE("jacobian rank") {
  const std::vector<Rational> one{1};
  CHECK(jacobian_rank_at(twisted_cubic(), one) == 2);
  CHECK(jacobian_rank_at(curve("const", {"1", "0", "0", "0"}), one) == 1);
  const auto cusp = curve("cusp", {"1", "t^2", "t^3", "0"});
  const std::vector<Rational> zero{0};
  CHECK(jacobian_rank_at(cusp, zero) == 1);
  CHECK(jacobian_rank_at(cusp, one) == 2);
}

TEST_CASE("sample points") {
  const auto x = twisted_cubic();
  const auto a = sample_points(x, 5, 42);
  const auto b = sample_points(x, 5, 42);
  REQUIRE(a.size() == 5);
  CHECK(a == b);
  std::set<std::vector<Rational>> distinct(a.begin(), a.end());
  CHECK(distinct.size() == 5);
  for (const auto& t : a) {
    CHECK(abs(t[0].get_num()) <= 100);
    CHECK(t[0].get_den() <= 100);
  }
  const auto small = sample_points(curve("needs_nonzero", {"t", "t^2", "t^3", "t^4"}), 2, 1, 1);
  for (const auto& t : small) CHECK(abs(t[0]) == 1);
  CHECK_THROWS_AS(sample_points(x, 0, 1), PreconditionError);
  CHECK_THROWS_AS(sample_points(curve("tiny", {"t", "1"}), 10, 1, 1), BudgetExhausted);

  set_thread_count(4);
  const auto c = sample_points(x, 5, 42);
  set_thread_count(1);
  CHECK(c == a);
}

TEST_CASE("sampling discards rank-deficient draws") {
  // The cusp parameter t = 0 is rank deficient; with height 1 the draws are in {-1, 0, 1}.
  const auto cusp = curve("cusp", {"1", "t^2", "t^3", "0"});
  const auto pts = sample_points(cusp, 2, 3, 1);
  for (const auto& t : pts) CHECK(t[0] != 0);
}

TEST_CASE("dimension estimate") {
  const auto est = dimension_estimate(twisted_cubic(), 10, 0);
  CHECK(est.dimension == 1);
  CHECK(est.rank_histogram.at(2) == 10);
  CHECK_FALSE(est.inconclusive);
  const ParamVariety surf("surf", {"a", "b"},
                          {parse_poly("1", {"a", "b"}), parse_poly("a", {"a", "b"}), parse_poly("b", {"a", "b"}),
                           parse_poly("a*b", {"a", "b"})});
  CHECK(dimension_estimate(surf, 5, 1).dimension == 2);
}

TEST_CASE("fiber-linear detection") {
  const std::vector<std::string> ts{"t", "s"};
  const ParamVariety lift("conic_lift", ts,
                          {parse_poly("1", ts), parse_poly("t", ts), parse_poly("t^2", ts), parse_poly("s*t^2", ts),
                           parse_poly("-2*s*t", ts), parse_poly("s", ts)});
  CHECK(lift.fiber_linear() == std::vector<std::size_t>{1});
  const ParamVariety declared("conic_lift", ts, lift.coords(), {"s"});
  CHECK(declared.declared_fiber());
  CHECK_THROWS_AS(ParamVariety("bad", ts, lift.coords(), {"t"}), PreconditionError);
  CHECK_THROWS_AS(ParamVariety("bad", ts, lift.coords(), {"u"}), UnknownVariable);
  CHECK_FALSE(lift.jointly_linear({0, 1}));
}

TEST_CASE("conormal covector") {
  const std::vector<std::string> x3{"x0", "x1", "x2"};
  const ImplicitHypersurface conic("conic", parse_poly("x0*x2 - x1^2", x3));
  const QVector w = q({1, 2, 4});
  const auto a = conormal_covector(conic, w);
  CHECK(a == q({4, -4, 1}));
  CHECK(dot<Rational>(a, w) == 0);
  CHECK_THROWS_AS(conormal_covector(conic, q({1, 1, 2})), PreconditionError);

  const std::vector<std::string> xyz{"x", "y", "z"};
  const ImplicitHypersurface nodal("nodal_cubic", parse_poly("z*y^2 - x^3 - x^2*z", xyz));
  CHECK_THROWS_AS(conormal_covector(nodal, q({0, 0, 1})), PreconditionError);
  const QVector p = q({3, 6, 1});
  const auto b = conormal_covector(nodal, p);
  CHECK(b == q({-33, 12, 27}));
  CHECK(dot<Rational>(b, p) == 0);

  // Annihilates the tangent of the local parametrization (1, t, t^2).
  for (long t = -4; t <= 4; ++t) {
    const QVector pt = q({1, t, t * t});
    const QVector tan = q({0, 1, 2 * t});
    CHECK(dot<Rational>(conormal_covector(conic, pt), tan) == 0);
  }
  CHECK_THROWS_AS(ImplicitHypersurface("bad", parse_poly("x0^2 + x1", x3)), PreconditionError);
}

TEST_CASE("hypersurface sampler") {
  const std::vector<std::string> x3{"x0", "x1", "x2"};
  const ImplicitHypersurface conic("conic", parse_poly("x0*x2 - x1^2", x3));
  const auto pts = hypersurface_points_exact(conic, 20, 5);
  CHECK(pts.size() == 20);
  for (const auto& w : pts) CHECK(sgn(conic.value(std::span<const Rational>(w), ExactField{})) == 0);
  CHECK(pts == hypersurface_points_exact(conic, 20, 5));

  const std::vector<std::string> x4{"x", "y", "z", "w"};
  const ImplicitHypersurface fermat("fermat", parse_poly("x^4 + y^4 + z^4 - 2*w^4 + x*y*z*w", x4));
  CHECK_THROWS_AS(hypersurface_points_exact(fermat, 5, 1, 10), BudgetExhausted);

  const ApproxField f(100);
  const auto apts = hypersurface_points_approx(fermat, 10, 2, f);
  CHECK(apts.size() == 10);
  for (const auto& w : apts) {
    const auto g = fermat.gradient(std::span<const BigFloat>(w), f);
    CHECK(abs(fermat.value(std::span<const BigFloat>(w), f)) < f.tolerance * max_abs(g));
  }
}
