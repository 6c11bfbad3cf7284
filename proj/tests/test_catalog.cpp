#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "leglab/catalog.hpp"

using namespace leglab;

namespace {

// Entries of the primitive generator, normalized so the first nonzero entry
// matches `expected`'s sign.
void check_form(const QMatrix& m, const std::map<std::pair<int, int>, long>& expected) {
  const auto first = expected.begin();
  const Rational scale = m(first->first.first, first->first.second) / first->second;
  REQUIRE(sgn(scale) != 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const auto it = expected.find({static_cast<int>(i), static_cast<int>(j)});
      const Rational want = it == expected.end() ? Rational(0) : Rational(it->second) * scale;
      CHECK(m(i, j) == want);
      CHECK(m(j, i) == -want);
    }
}

}  // namespace

TEST_CASE("cubic form recipe") {
  const std::vector<std::string> w{"w"};
  const auto x = cubic_form_variety("cubic", parse_poly("w^3", w));
  REQUIRE(x.ambient() == 4);
  CHECK(x.coords()[2] == parse_poly("3*w^2", w));
  const auto fit = fitted_form_family(x);
  CHECK(fit.basis.size() == 1);
  CHECK(fit.nondegenerate);
  CHECK_THROWS_AS(cubic_form_variety("bad", parse_poly("w^2", w)), PreconditionError);
  CHECK_THROWS_AS(cubic_form_variety("bad", parse_poly("w^3 + w", w)), PreconditionError);
}

TEST_CASE("fitted forms match the symbolic oracle") {
  check_form(entry_form(catalog_build("twisted_cubic")).matrix(), {{{0, 3}, 1}, {{1, 2}, -3}});
  check_form(entry_form(catalog_build("conic_conormal_demo")).matrix(), {{{0, 3}, 1}, {{1, 4}, 1}, {{2, 5}, 1}});
  check_form(entry_form(catalog_build("p1xQ(2)")).matrix(), {{{0, 7}, -1}, {{1, 4}, 1}, {{2, 5}, 1}, {{3, 6}, 1}});
  check_form(entry_form(catalog_build("lg36")).matrix(),
             {{{0, 13}, -1}, {{1, 7}, 1}, {{2, 8}, 1}, {{3, 9}, 1}, {{4, 10}, 1}, {{5, 11}, 1}, {{6, 12}, 1}});
}

TEST_CASE("entry shapes") {
  const auto lg = catalog_build("lg36");
  CHECK(lg.variety->ambient() == 14);
  CHECK(lg.expected_dimension == 6);
  CHECK(dimension_estimate(*lg.variety, 20, 0).dimension == 6);
  const auto gr = catalog_build("gr36");
  CHECK(gr.variety->ambient() == 20);
  CHECK(dimension_estimate(*gr.variety, 10, 0).dimension == 9);
  const auto sp = catalog_build("spinor6");
  CHECK(sp.variety->ambient() == 32);
  CHECK(sp.expected_dimension == 15);
  // Pfaffian of a 6x6 antisymmetric matrix has 15 terms.
  CHECK(sp.variety->coords().back().terms().size() == 15);
  const auto pq = catalog_build("p1xQ(3)");
  CHECK(pq.variety->ambient() == 10);
  CHECK(pq.expected_dimension == 4);
  CHECK(catalog_build("conic_conormal_demo").variety->ambient() == 6);

  const auto k = catalog_build("kummer");
  REQUIRE(k.is_hypersurface());
  CHECK(k.known_singular.size() == 16);
  CHECK(k.recommended_backend == Backend::approx);
  CHECK(k.hypersurface->degree() == 4);
  for (const auto& p : k.known_singular) {
    CHECK(k.hypersurface->value(std::span<const Rational>(p), ExactField{}) == 0);
    CHECK(is_zero_vector(k.hypersurface->gradient(std::span<const Rational>(p), ExactField{})));
  }

  CHECK_THROWS_AS(catalog_build("e7"), CatalogError);
  CHECK_THROWS_AS(catalog_build("p1xQ(0)"), CatalogError);
  CHECK_THROWS_AS(catalog_build("p1xQ(x)"), CatalogError);
  CHECK_THROWS_AS(catalog_get("e7"), CatalogError);
}

TEST_CASE("self checks") {
  for (const char* name : {"twisted_cubic", "conic_conormal_demo", "p1xQ(1)", "p1xQ(3)", "lg36", "nodal_cubic"}) {
    const auto rep = self_check(catalog_build(name));
    CAPTURE(name);
    CHECK(rep.verdict == Verdict::pass);
    CHECK(rep.samples_evaluated == 50);
  }
  const auto tc = self_check(catalog_build("twisted_cubic"));
  CHECK(tc.details["fit_dimension"] == 1);
  CHECK(tc.details["dimension"] == 1);
  CHECK(catalog_get("twisted_cubic").name == "twisted_cubic");
}

TEST_CASE("corrupted entry is not served") {
  auto e = catalog_build("twisted_cubic");
  auto coords = e.variety->coords();
  coords.pop_back();
  e.name = "twisted_cubic_dropped";
  e.variety = std::make_shared<const ParamVariety>(e.name, e.variety->params(), coords);
  e.expected_ambient = 3;
  const auto rep = self_check(e);
  CHECK(rep.verdict == Verdict::fail);
  CHECK(rep.details["fit_dimension"] != 1);
  CHECK_THROWS_AS(entry_form(e), CatalogError);

  auto n = catalog_build("nodal_cubic");
  n.known_singular = {QVector{1, 0, 0}};
  CHECK(self_check(n).verdict == Verdict::fail);
}
