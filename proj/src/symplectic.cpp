#include "leglab/symplectic.hpp"

#include "leglab/errors.hpp"
#include "leglab/rng.hpp"

namespace leglab {

SymplecticForm::SymplecticForm(QMatrix omega) : omega_(std::move(omega)) {
  const std::size_t d = omega_.rows();
  if (d == 0 || d != omega_.cols() || d % 2) throw DimensionMismatch("symplectic form must be square of even size");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (omega_(i, j) != -omega_(j, i)) throw PreconditionError("symplectic form is not antisymmetric");
  if (rank(omega_) != d) throw PreconditionError("symplectic form is degenerate");
}

SymplecticForm SymplecticForm::standard(std::size_t half_dim) {
  if (half_dim == 0) throw PreconditionError("standard_form: half dimension must be at least 1");
  QMatrix m(2 * half_dim, 2 * half_dim);
  for (std::size_t i = 0; i < half_dim; ++i) {
    m(i, half_dim + i) = 1;
    m(half_dim + i, i) = -1;
  }
  return SymplecticForm(std::move(m));
}

namespace {

void require_independent(const std::vector<QVector>& rows, std::size_t d) {
  for (const auto& r : rows)
    if (r.size() != d) throw DimensionMismatch("subspace basis has the wrong width");
  if (rank(stack_rows(rows, d)) != rows.size()) throw PreconditionError("subspace basis rows are dependent");
}

bool contains(const std::vector<QVector>& span_rows, const std::vector<QVector>& vecs, std::size_t d) {
  const std::size_t r = rank(stack_rows(span_rows, d));
  auto all = span_rows;
  all.insert(all.end(), vecs.begin(), vecs.end());
  return rank(stack_rows(all, d)) == r;
}

}  // namespace

std::vector<QVector> symplectic_perp(const SymplecticForm& f, const std::vector<QVector>& rows) {
  const std::size_t d = f.dim();
  require_independent(rows, d);
  if (rows.empty()) {
    std::vector<QVector> all;
    for (std::size_t i = 0; i < d; ++i) {
      QVector e(d);
      e[i] = 1;
      all.push_back(e);
    }
    return all;
  }
  return kernel_basis(stack_rows(rows, d) * f.matrix());
}

std::string to_string(SubspaceClass c) {
  switch (c) {
    case SubspaceClass::isotropic: return "isotropic";
    case SubspaceClass::coisotropic: return "coisotropic";
    case SubspaceClass::lagrangian: return "lagrangian";
    case SubspaceClass::symplectic: return "symplectic";
    case SubspaceClass::generic: return "generic";
  }
  return "generic";
}

SubspaceClass classify_subspace(const SymplecticForm& f, const std::vector<QVector>& rows) {
  const std::size_t d = f.dim();
  const auto perp = symplectic_perp(f, rows);
  const bool iso = contains(perp, rows, d);
  const bool coiso = contains(rows, perp, d);
  if (iso && coiso) return SubspaceClass::lagrangian;
  if (iso) return SubspaceClass::isotropic;
  if (coiso) return SubspaceClass::coisotropic;
  auto both = rows;
  both.insert(both.end(), perp.begin(), perp.end());
  if (rank(stack_rows(both, d)) == rows.size() + perp.size()) return SubspaceClass::symplectic;
  return SubspaceClass::generic;
}

Hyperplane make_hyperplane(const SymplecticForm& f, const QVector& a) {
  if (a.size() != f.dim()) throw DimensionMismatch("hyperplane covector has the wrong size");
  if (is_zero_vector(a)) throw PreconditionError("hyperplane covector is zero");
  const auto sol = solve_linear(f.matrix(), a);
  Hyperplane hp;
  hp.a = primitive(a);
  hp.h = primitive(sol.particular);
  return hp;
}

QuotientChart induced_form(const SymplecticForm& f, const QVector& a, const std::optional<std::vector<QVector>>& section) {
  const std::size_t d = f.dim();
  QuotientChart chart;
  chart.hyperplane = make_hyperplane(f, a);
  const QVector& h = chart.hyperplane.h;
  const QVector& av = chart.hyperplane.a;

  std::vector<QVector> cs;
  if (section) {
    if (section->size() != d - 2) throw DimensionMismatch("section basis must have dim V - 2 vectors");
    for (const auto& c : *section)
      if (c.size() != d || dot<Rational>(av, c) != 0) throw PreconditionError("section vector not in the hyperplane");
    cs = *section;
  } else {
    // Greedy: kernel vectors of a that stay independent of h.
    QMatrix arow(1, d);
    for (std::size_t j = 0; j < d; ++j) arow(0, j) = av[j];
    std::vector<QVector> acc{h};
    for (const auto& k : kernel_basis(arow)) {
      acc.push_back(k);
      if (rank(stack_rows(acc, d)) == acc.size())
        cs.push_back(k);
      else
        acc.pop_back();
      if (cs.size() == d - 2) break;
    }
  }
  // Any vector off H completes the basis; a coordinate vector with a_j != 0 works.
  QVector u(d);
  for (std::size_t j = 0; j < d; ++j)
    if (sgn(av[j]) != 0) {
      u[j] = 1;
      break;
    }
  QMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    m(i, 0) = h[i];
    for (std::size_t c = 0; c < cs.size(); ++c) m(i, c + 1) = cs[c][i];
    m(i, d - 1) = u[i];
  }
  if (rank(m) != d) throw PreconditionError("section basis is not independent modulo the center line");
  const QMatrix minv = inverse(m);
  chart.q = QMatrix(d - 2, d);
  chart.s = QMatrix(d, d - 2);
  for (std::size_t r = 0; r < d - 2; ++r)
    for (std::size_t j = 0; j < d; ++j) {
      chart.q(r, j) = minv(r + 1, j);
      chart.s(j, r) = cs[r][j];
    }
  chart.omega_prime = chart.s.transpose() * f.matrix() * chart.s;
  return chart;
}

CoisotropicSubspace random_coisotropic(const SymplecticForm& f, std::size_t k, std::uint64_t seed) {
  if (k < 1 || k > f.half_dim()) throw PreconditionError("random_coisotropic: k out of range");
  const std::size_t d = f.dim();
  Rng rng(mix_seed(seed, 0xc0150));
  CoisotropicSubspace out;
  for (std::size_t step = 0; step < k; ++step) {
    const auto perp = symplectic_perp(f, out.isotropic);
    for (int attempt = 0;; ++attempt) {
      if (attempt > 1000) throw BudgetExhausted("random_coisotropic: could not extend isotropic subspace");
      QVector v(d);
      for (const auto& p : perp) {
        const long c = static_cast<long>(rng.uniform_int(-9, 9));
        for (std::size_t j = 0; j < d; ++j) v[j] += c * p[j];
      }
      auto trial = out.isotropic;
      trial.push_back(v);
      if (rank(stack_rows(trial, d)) == trial.size()) {
        out.isotropic.push_back(primitive(v));
        break;
      }
    }
  }
  out.basis = symplectic_perp(f, out.isotropic);
  return out;
}

SymplecticForm random_symplectic_form(std::size_t half_dim, std::uint64_t seed) {
  const std::size_t d = 2 * half_dim;
  Rng rng(mix_seed(seed, 0xf0e3));
  for (;;) {
    QMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        m(i, j) = static_cast<long>(rng.uniform_int(-5, 5));
        m(j, i) = -m(i, j);
      }
    if (rank(m) == d) return SymplecticForm(std::move(m));
  }
}

QMatrix antisymmetric_from_upper(std::size_t d, std::span<const Rational> x) {
  if (x.size() != d * (d - 1) / 2) throw DimensionMismatch("antisymmetric_from_upper: wrong unknown count");
  QMatrix m(d, d);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j, ++idx) {
      m(i, j) = x[idx];
      m(j, i) = -x[idx];
    }
  return m;
}

FitResult fit_symplectic_form(const std::vector<std::vector<QVector>>& frames, std::uint64_t seed) {
  if (frames.empty()) throw PreconditionError("fit_symplectic_form: empty frame list");
  FitResult out;
  std::size_t d = 0;
  for (const auto& fr : frames)
    for (const auto& v : fr) {
      if (d == 0) d = v.size();
      if (v.size() != d) throw DimensionMismatch("fit_symplectic_form: frames disagree on ambient dimension");
    }
  if (d < 2) throw DimensionMismatch("fit_symplectic_form: ambient dimension too small");
  out.ambient = d;
  out.unknowns = d * (d - 1) / 2;
  QMatrix eqs(0, out.unknowns);
  std::vector<Rational> row(out.unknowns);
  for (const auto& fr : frames)
    for (std::size_t a = 0; a < fr.size(); ++a)
      for (std::size_t b = a + 1; b < fr.size(); ++b) {
        std::size_t idx = 0;
        bool nonzero = false;
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = i + 1; j < d; ++j, ++idx) {
            row[idx] = fr[a][i] * fr[b][j] - fr[a][j] * fr[b][i];
            nonzero = nonzero || sgn(row[idx]) != 0;
          }
        if (nonzero) eqs.append_row(row);
      }
  out.equations = eqs.rows();
  std::vector<QVector> ker;
  if (eqs.rows() == 0) {
    for (std::size_t i = 0; i < out.unknowns; ++i) {
      QVector e(out.unknowns);
      e[i] = 1;
      ker.push_back(e);
    }
  } else {
    ker = kernel_basis_modular(eqs);
  }
  for (const auto& k : ker) out.basis.push_back(antisymmetric_from_upper(d, k));
  if (out.basis.empty() || d % 2) return out;
  Rng rng(mix_seed(seed, 0xf17));
  QMatrix mix(d, d);
  for (const auto& b : out.basis) {
    const long c = static_cast<long>(rng.uniform_int(-100, 100));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (sgn(b(i, j)) != 0) mix(i, j) += c * b(i, j);
  }
  out.nondegenerate = rank(mix) == d;
  for (std::size_t i = 0; !out.nondegenerate && i < out.basis.size(); ++i) out.nondegenerate = rank(out.basis[i]) == d;
  return out;
}

}  // namespace leglab
