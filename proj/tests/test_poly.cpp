#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "leglab/poly.hpp"
#include "leglab/rng.hpp"

using namespace leglab;

namespace {

const std::vector<std::string> XY{"x", "y"};
const std::vector<std::string> XYZ{"x", "y", "z"};

MultiPoly random_poly(Rng& rng, const std::vector<std::string>& vars, int terms, int max_exp) {
  MultiPoly p(vars);
  for (int i = 0; i < terms; ++i) {
    Exponent e(vars.size());
    for (auto& x : e) x = static_cast<std::uint32_t>(rng.uniform_int(0, max_exp));
    p.add_term(e, rng.rational(9));
  }
  return p;
}

std::vector<Rational> random_point(Rng& rng, std::size_t n) {
  std::vector<Rational> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(rng.rational(20));
  return v;
}

Rational eval_at(const MultiPoly& p, const std::vector<Rational>& v) {
  return evaluate(p, std::span<const Rational>(v), ExactField{});
}

}  // namespace

TEST_CASE("parse examples") {
  const MultiPoly p = parse_poly("t^2 - 1", {"t"});
  CHECK(p.coefficient({2}) == 1);
  CHECK(p.coefficient({0}) == -1);
  CHECK(p.terms().size() == 2);

  const MultiPoly q = parse_poly("x*y + 3", XY);
  CHECK(q.coefficient({1, 1}) == 1);
  CHECK(q.coefficient({0, 0}) == 3);
  CHECK(q.terms().size() == 2);

  try {
    parse_poly("t^^2", {"t"});
    FAIL("expected a syntax error");
  } catch (const ParseError& e) {
    CHECK(e.offset == 2);
  }
  CHECK_THROWS_AS(parse_poly("x + w", XY), UnknownVariable);
  CHECK_THROWS_AS(parse_poly("x/2", XY), ParseError);
  CHECK_THROWS_AS(parse_poly("1/0", XY), ParseError);
  CHECK_THROWS_AS(parse_poly("(x + y", XY), ParseError);
  CHECK_THROWS_AS(parse_poly("", XY), ParseError);

  CHECK(parse_poly("-(x - y)^2 + 1/2", XY).to_string() == "-x^2 + 2*x*y - y^2 + 1/2");
  CHECK(parse_poly("0", XY).is_zero());
}

TEST_CASE("evaluate examples") {
  CHECK(evaluate(parse_poly("t^3", {"t"}), {{"t", Rational(2)}}) == 8);
  CHECK(evaluate(parse_poly("x*y+3", XY), {{"x", Rational(2)}, {"y", Rational(5)}}) == 13);
  CHECK(evaluate(MultiPoly::constant(XY, 7), {{"x", Rational(11)}, {"y", Rational(-4)}}) == 7);
  CHECK_THROWS_AS(evaluate(parse_poly("x*y", XY), {{"x", Rational(1)}}), UnknownVariable);
}

TEST_CASE("partial examples") {
  CHECK(partial(parse_poly("t^3", {"t"}), "t") == parse_poly("3*t^2", {"t"}));
  CHECK(partial(parse_poly("x*y + 3", XY), "x") == parse_poly("y", XY));
  CHECK(partial(MultiPoly::constant(XY, 7), "y").is_zero());
  CHECK_THROWS_AS(partial(parse_poly("x", XY), "q"), UnknownVariable);
}

TEST_CASE("substitute examples") {
  const std::vector<std::string> T{"t"};
  const MultiPoly a = substitute(parse_poly("t*s - 1", {"t", "s"}), {{"s", Rational(2)}}, T);
  CHECK(a == parse_poly("2*t - 1", T));
  const MultiPoly b = substitute(parse_poly("x^2 + y", XY),
                                 {{"x", MultiPoly::variable(T, "t")}, {"y", MultiPoly::variable(T, "t")}}, T);
  CHECK(b == parse_poly("t^2 + t", T));
  CHECK(substitute(parse_poly("x", {"x"}), {{"x", Rational(0)}}, T).is_zero());
  CHECK_THROWS_AS(substitute(parse_poly("x + y", XY), {{"x", MultiPoly::variable({"u"}, "u")}}, T), DimensionMismatch);
}

TEST_CASE("ring axioms and Leibniz rule on random polynomials") {
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const MultiPoly p = random_poly(rng, XYZ, 5, 3);
    const MultiPoly q = random_poly(rng, XYZ, 5, 3);
    const MultiPoly r = random_poly(rng, XYZ, 4, 2);
    CHECK((p + q) * r == p * r + q * r);
    CHECK(p * q == q * p);
    CHECK((p * q) * r == p * (q * r));
    CHECK(p - p == MultiPoly(XYZ));
    for (const auto& v : XYZ) {
      CHECK(partial(p + q, v) == partial(p, v) + partial(q, v));
      CHECK(partial(p * q, v) == partial(p, v) * q + p * partial(q, v));
    }
    const auto pt = random_point(rng, 3);
    CHECK(eval_at(p * q, pt) == eval_at(p, pt) * eval_at(q, pt));
  }
}

TEST_CASE("derivative agrees with central finite difference") {
  Rng rng(7);
  const ApproxField f(200);
  const BigFloat h = BigFloat::pow2(-20, 200);
  const BigFloat two(2L, 200);
  for (int trial = 0; trial < 30; ++trial) {
    const MultiPoly p = random_poly(rng, XY, 6, 4);
    const auto pt = random_point(rng, 2);
    std::vector<BigFloat> a{f.from(pt[0]), f.from(pt[1])};
    for (std::size_t var = 0; var < 2; ++var) {
      auto plus = a, minus = a;
      plus[var] += h;
      minus[var] -= h;
      const BigFloat fd = (evaluate(p, std::span<const BigFloat>(plus), f) - evaluate(p, std::span<const BigFloat>(minus), f)) /
                          (two * h);
      const BigFloat exact = evaluate(partial(p, var), std::span<const BigFloat>(a), f);
      // The truncation error is h^2/6 times the third derivative; the bound
      // scales with the size of the polynomial near the point.
      BigFloat scale(1L, 200);
      for (const auto& [e, c] : p.terms()) scale += abs(f.from(c)) * BigFloat(1000000L, 200);
      CHECK(abs(fd - exact) < BigFloat(10L, 200) * h * h * scale);
    }
  }
}

TEST_CASE("substitute then evaluate equals composed evaluation") {
  Rng rng(11);
  const std::vector<std::string> UV{"u", "v"};
  for (int trial = 0; trial < 40; ++trial) {
    const MultiPoly p = random_poly(rng, XYZ, 5, 3);
    const MultiPoly bx = random_poly(rng, UV, 3, 2);
    const MultiPoly by = random_poly(rng, UV, 3, 2);
    const Rational cz = rng.rational(10);
    const MultiPoly s = substitute(p, {{"x", bx}, {"y", by}, {"z", cz}}, UV);
    const auto uv = random_point(rng, 2);
    CHECK(eval_at(s, uv) == eval_at(p, {eval_at(bx, uv), eval_at(by, uv), cz}));
  }
}

TEST_CASE("print and parse round trip") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const MultiPoly p = random_poly(rng, XYZ, 6, 3);
    const std::string text = p.to_string();
    const MultiPoly back = parse_poly(text, XYZ);
    CHECK(back == p);
    CHECK(back.to_string() == text);
  }
}

TEST_CASE("degree and homogeneity") {
  const MultiPoly p = parse_poly("x^3 + x*y*z - 2*z^3", XYZ);
  CHECK(p.total_degree() == 3);
  CHECK(p.is_homogeneous());
  CHECK_FALSE(parse_poly("x^2 + y", XYZ).is_homogeneous());
  CHECK(MultiPoly(XYZ).total_degree() == -1);
  CHECK(p.degree_in(0) == 3);
  CHECK(rebase(p, {"z", "y", "x", "w"}).to_string() == "-2*z^3 + z*y*x + x^3");
}
