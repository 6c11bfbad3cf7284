#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "leglab/rng.hpp"
#include "leglab/symplectic.hpp"

using namespace leglab;

namespace {

QVector e(std::size_t d, std::size_t i) {
  QVector v(d);
  v[i] = 1;
  return v;
}

QVector random_vec(Rng& rng, std::size_t d, int bound = 20) {
  QVector v(d);
  for (auto& x : v) x = static_cast<long>(rng.uniform_int(-bound, bound));
  return v;
}

bool same_span(const std::vector<QVector>& a, const std::vector<QVector>& b, std::size_t d) {
  auto all = a;
  all.insert(all.end(), b.begin(), b.end());
  const auto r = rank(stack_rows(all, d));
  return r == rank(stack_rows(a, d)) && r == rank(stack_rows(b, d));
}

}  // namespace

TEST_CASE("standard form") {
  const auto f1 = SymplecticForm::standard(1);
  CHECK(f1.matrix() == QMatrix{{0, 1}, {-1, 0}});
  const auto f2 = SymplecticForm::standard(2);
  CHECK(f2.matrix()(0, 2) == 1);
  CHECK(f2.matrix()(1, 3) == 1);
  CHECK(f2.matrix()(2, 0) == -1);
  CHECK(f2.matrix()(0, 1) == 0);
  CHECK_THROWS_AS(SymplecticForm::standard(0), PreconditionError);
  CHECK_THROWS_AS(SymplecticForm(QMatrix{{0, 1}, {1, 0}}), PreconditionError);
  CHECK_THROWS_AS(SymplecticForm(QMatrix{{0, 0}, {0, 0}}), PreconditionError);
}

TEST_CASE("omega_eval") {
  const auto f = SymplecticForm::standard(2);
  CHECK(omega_eval(f, e(4, 0), e(4, 2)) == 1);
  CHECK(omega_eval(f, e(4, 0), e(4, 1)) == 0);
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto v = random_vec(rng, 4), w = random_vec(rng, 4);
    CHECK(omega_eval(f, v, v) == 0);
    CHECK(omega_eval(f, v, w) == -omega_eval(f, w, v));
  }
  CHECK_THROWS_AS(omega_eval(f, e(3, 0), e(4, 0)), DimensionMismatch);
}

TEST_CASE("symplectic perp examples") {
  const auto f = SymplecticForm::standard(2);
  const auto p = symplectic_perp(f, {e(4, 1), e(4, 2), e(4, 3)});
  REQUIRE(p.size() == 1);
  CHECK(p[0] == QVector{0, 0, 1, 0});
  CHECK(same_span(symplectic_perp(f, {e(4, 0), e(4, 1)}), {e(4, 0), e(4, 1)}, 4));
  CHECK(symplectic_perp(f, {e(4, 0), e(4, 1), e(4, 2), e(4, 3)}).empty());
  CHECK_THROWS_AS(symplectic_perp(f, {e(4, 0), e(4, 0)}), PreconditionError);
}

TEST_CASE("perp is an involution and dimensions add up") {
  Rng rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const auto f = random_symplectic_form(n, rng.next());
    const std::size_t d = 2 * n;
    const std::size_t k = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(d)));
    std::vector<QVector> s;
    while (s.size() < k) {
      s.push_back(random_vec(rng, d, 5));
      if (rank(stack_rows(s, d)) != s.size()) s.pop_back();
    }
    const auto p = symplectic_perp(f, s);
    CHECK(p.size() + s.size() == d);
    if (!p.empty()) CHECK(same_span(symplectic_perp(f, p), s, d));
  }
}

TEST_CASE("classify subspace") {
  const auto f = SymplecticForm::standard(2);
  CHECK(classify_subspace(f, {e(4, 0), e(4, 1)}) == SubspaceClass::lagrangian);
  // v^T Omega = (-v2, -v3, v0, v1), so the perp of span{e0,e1,e2} is span{e1}.
  const auto p = symplectic_perp(f, {e(4, 0), e(4, 1), e(4, 2)});
  REQUIRE(p.size() == 1);
  CHECK(p[0] == e(4, 1));
  CHECK(classify_subspace(f, {e(4, 0), e(4, 1), e(4, 2)}) == SubspaceClass::coisotropic);
  CHECK(classify_subspace(f, {e(4, 0)}) == SubspaceClass::isotropic);
  CHECK(classify_subspace(f, {e(4, 0), e(4, 2)}) == SubspaceClass::symplectic);
  CHECK(classify_subspace(f, {e(4, 0), QVector{0, 1, 1, 0}}) == SubspaceClass::symplectic);
  CHECK(classify_subspace(SymplecticForm::standard(3), {e(6, 0), e(6, 3), e(6, 1)}) == SubspaceClass::generic);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto g = random_symplectic_form(3, rng.next());
    QMatrix arow(1, 6);
    const auto a = random_vec(rng, 6);
    if (is_zero_vector(a)) continue;
    for (std::size_t j = 0; j < 6; ++j) arow(0, j) = a[j];
    CHECK(classify_subspace(g, kernel_basis(arow)) == SubspaceClass::coisotropic);
  }
}

TEST_CASE("induced form examples") {
  const auto f = SymplecticForm::standard(2);
  const auto chart = induced_form(f, e(4, 0));
  CHECK(chart.hyperplane.h == e(4, 2));
  CHECK(chart.omega_prime == QMatrix{{0, 1}, {-1, 0}});
  CHECK(chart.q.rows() == 2);
  const auto qh = chart.q * chart.hyperplane.h;
  CHECK(is_zero_vector(qh));
  CHECK(chart.q * chart.s == QMatrix::identity(2, 0, 1));
  // Chart basis is {e1, e3}.
  CHECK(chart.s.col_vector(0) == e(4, 1));
  CHECK(chart.s.col_vector(1) == e(4, 3));

  Rng rng(4);
  QMatrix arow{{1, 0, 0, 0}};
  const auto hb = kernel_basis(arow);
  for (int i = 0; i < 100; ++i) {
    QVector v(4), w(4);
    for (const auto& b : hb) {
      const long c1 = static_cast<long>(rng.uniform_int(-30, 30)), c2 = static_cast<long>(rng.uniform_int(-30, 30));
      for (std::size_t j = 0; j < 4; ++j) {
        v[j] += c1 * b[j];
        w[j] += c2 * b[j];
      }
    }
    CHECK(omega_eval<Rational>(chart.omega_prime, chart.q * v, chart.q * w) == omega_eval(f, v, w));
  }
  CHECK_THROWS_AS(induced_form(f, QVector(4)), PreconditionError);
}

TEST_CASE("induced form with an explicit section basis") {
  const auto f = SymplecticForm::standard(2);
  const auto chart = induced_form(f, QVector{1, 0, 0, 0}, std::vector<QVector>{e(4, 3), QVector{0, 1, 1, 0}});
  CHECK(chart.omega_prime == QMatrix{{0, -1}, {1, 0}});
  CHECK_THROWS_AS(induced_form(f, QVector{1, 0, 0, 0}, std::vector<QVector>{e(4, 3), e(4, 0)}), PreconditionError);
  CHECK_THROWS_AS(induced_form(f, QVector{1, 0, 0, 0}, std::vector<QVector>{e(4, 3), e(4, 2)}), PreconditionError);
}

TEST_CASE("random coisotropic") {
  const auto f = SymplecticForm::standard(3);
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    for (std::size_t k = 1; k <= 3; ++k) {
      const auto c = random_coisotropic(f, k, seed);
      CHECK(c.basis.size() == 6 - k);
      const auto cls = classify_subspace(f, c.basis);
      if (k == 3)
        CHECK(cls == SubspaceClass::lagrangian);
      else
        CHECK(cls == SubspaceClass::coisotropic);
    }
  const auto a = random_coisotropic(SymplecticForm::standard(2), 1, 42);
  const auto b = random_coisotropic(SymplecticForm::standard(2), 1, 42);
  CHECK(a.isotropic == b.isotropic);
  CHECK(a.basis == b.basis);
  CHECK_THROWS_AS(random_coisotropic(f, 0, 1), PreconditionError);
  CHECK_THROWS_AS(random_coisotropic(f, 4, 1), PreconditionError);
}

TEST_CASE("fit twisted cubic form") {
  std::vector<std::vector<QVector>> frames;
  for (long t : {0L, 1L, 2L, 3L, 5L})
    frames.push_back({QVector{1, t, t * t, t * t * t}, QVector{0, 1, 2 * t, 3 * t * t}});
  const auto fit = fit_symplectic_form(frames);
  REQUIRE(fit.basis.size() == 1);
  const QMatrix& om = fit.basis[0];
  CHECK(om(0, 3) == 1);
  CHECK(om(1, 2) == -3);
  CHECK(om(0, 1) == 0);
  CHECK(om(0, 2) == 0);
  CHECK(om(1, 3) == 0);
  CHECK(om(2, 3) == 0);
  CHECK(fit.nondegenerate);
  for (const auto& fr : frames) CHECK(omega_eval<Rational>(om, fr[0], fr[1]) == 0);
}

TEST_CASE("fit edge cases") {
  std::vector<QVector> full{e(4, 0), e(4, 1), e(4, 2), e(4, 3)};
  CHECK(fit_symplectic_form({full}).basis.empty());
  CHECK(fit_symplectic_form({{e(4, 0)}}).basis.size() == 6);
  CHECK_THROWS_AS(fit_symplectic_form({}), PreconditionError);
  // A degenerate family: all solutions vanish on a common direction.
  const auto deg = fit_symplectic_form({{e(4, 0), e(4, 1)}, {e(4, 0), e(4, 2)}, {e(4, 0), e(4, 3)}});
  CHECK(deg.basis.size() == 3);
  CHECK(deg.degenerate_family());
}

TEST_CASE("fitted forms annihilate every frame pair") {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<QVector>> frames;
    for (int k = 0; k < 3; ++k) frames.push_back({random_vec(rng, 6, 5), random_vec(rng, 6, 5)});
    const auto fit = fit_symplectic_form(frames);
    CHECK(fit.basis.size() == 15 - 3);
    for (const auto& om : fit.basis)
      for (const auto& fr : frames) CHECK(omega_eval<Rational>(om, fr[0], fr[1]) == 0);
  }
}
