#include "leglab/linalg.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>

namespace leglab {

IntRows clear_denominators(const QMatrix& m) {
  IntRows out(m.rows(), std::vector<Integer>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
    }
  }
  return out;
}

BareissEchelon bareiss_echelon(IntRows m, bool check_divisibility) {
  BareissEchelon e;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m.front().size() : 0;
  Integer prev = 1;
  std::size_t r = 0;
  Integer t;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      std::swap(m[piv], m[r]);
      e.swap_parity ^= 1;
    }
    const Integer& p = m[r][c];
    for (std::size_t i = r + 1; i < rows; ++i) {
      const Integer f = m[i][c];
      for (std::size_t j = c + 1; j < cols; ++j) {
        t = p * m[i][j];
        if (f != 0) t -= f * m[r][j];
        if (check_divisibility && !mpz_divisible_p(t.get_mpz_t(), prev.get_mpz_t()))
          throw std::logic_error("fraction-free elimination produced a non-integral entry");
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = p;
    e.pivot_cols.push_back(c);
    ++r;
  }
  e.last_pivot = prev;
  e.rows = std::move(m);
  return e;
}

std::size_t rank(const QMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return bareiss_echelon(clear_denominators(m)).pivot_cols.size();
}

BigFloat max_abs(std::span<const BigFloat> v) {
  BigFloat best(v.empty() ? 128 : v.front().precision());
  for (const auto& x : v) {
    BigFloat a = abs(x);
    if (a > best) best = a;
  }
  return best;
}

namespace {

BigFloat matrix_scale(const RMatrix& m, mpfr_prec_t prec) {
  BigFloat s(prec);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    BigFloat r = max_abs(m.row(i));
    if (r > s) s = r;
  }
  return s;
}

// Partial-pivoting Gauss-Jordan. Returns the pivot columns; `a` is left in
// reduced row echelon form over the pivot rows.
std::vector<std::size_t> approx_rref(RMatrix& a, const ApproxField& field, std::size_t active_cols) {
  std::vector<std::size_t> pivots;
  const BigFloat scale = matrix_scale(a, field.precision);
  if (scale.sign() == 0) return pivots;
  const BigFloat threshold = field.tolerance * scale;
  std::size_t r = 0;
  for (std::size_t c = 0; c < active_cols && r < a.rows(); ++c) {
    std::size_t best = r;
    BigFloat best_abs = abs(a(r, c));
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      BigFloat v = abs(a(i, c));
      if (v > best_abs) {
        best_abs = v;
        best = i;
      }
    }
    if (best_abs <= threshold) {
      for (std::size_t i = r; i < a.rows(); ++i) a(i, c) = field.zero();
      continue;
    }
    if (best != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(best, j), a(r, j));
    const BigFloat inv = field.one() / a(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c).sign() == 0) continue;
      const BigFloat f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
      a(i, c) = field.zero();
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank(const RMatrix& m, const ApproxField& field) {
  RMatrix a = m;
  return approx_rref(a, field, a.cols()).size();
}

namespace {

// Back substitution on a Bareiss echelon for the free column `free_col`.
QVector kernel_vector(const BareissEchelon& e, std::size_t cols, std::size_t free_col) {
  QVector x(cols);
  x[free_col] = 1;
  for (std::size_t k = e.pivot_cols.size(); k-- > 0;) {
    const std::size_t pc = e.pivot_cols[k];
    Rational acc = 0;
    for (std::size_t j = pc + 1; j < cols; ++j) {
      if (sgn(x[j]) == 0 || e.rows[k][j] == 0) continue;
      acc += Rational(e.rows[k][j]) * x[j];
    }
    x[pc] = -acc / Rational(e.rows[k][pc]);
  }
  return primitive(x);
}

std::vector<std::size_t> free_columns(const std::vector<std::size_t>& pivots, std::size_t cols) {
  std::vector<std::size_t> out;
  std::size_t k = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    if (k < pivots.size() && pivots[k] == c)
      ++k;
    else
      out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<QVector> kernel_basis(const QMatrix& m) {
  std::vector<QVector> out;
  if (m.cols() == 0) return out;
  if (m.rows() == 0) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      QVector v(m.cols());
      v[c] = 1;
      out.push_back(std::move(v));
    }
    return out;
  }
  const BareissEchelon e = bareiss_echelon(clear_denominators(m));
  for (std::size_t f : free_columns(e.pivot_cols, m.cols())) out.push_back(kernel_vector(e, m.cols(), f));
  return out;
}

std::vector<RVector> kernel_basis(const RMatrix& m, const ApproxField& field) {
  std::vector<RVector> out;
  RMatrix a = m;
  const auto pivots = approx_rref(a, field, a.cols());
  for (std::size_t f : free_columns(pivots, m.cols())) {
    RVector x(m.cols(), field.zero());
    x[f] = field.one();
    for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = -a(k, f);
    const BigFloat s = max_abs(x);
    for (auto& v : x) v /= s;
    out.push_back(std::move(x));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Modular kernel with certification.

namespace {

constexpr std::array<std::uint64_t, 12> kPrimes = {2147483647ULL, 2147483629ULL, 2147483587ULL, 2147483579ULL,
                                                   2147483563ULL, 2147483549ULL, 2147483543ULL, 2147483497ULL,
                                                   2147483489ULL, 2147483477ULL, 2147483423ULL, 2147483399ULL};

using u64 = std::uint64_t;

// Operands stay below 2^31, so products fit in 64 bits.
u64 mulmod(u64 a, u64 b, u64 p) { return a * b % p; }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

struct ModKernel {
  std::vector<std::size_t> pivots;
  std::vector<std::vector<u64>> vectors;  // one per free column, free entry = 1
};

std::optional<ModKernel> kernel_mod(const QMatrix& m, u64 p) {
  const std::size_t rows = m.rows(), cols = m.cols();
  const Integer pm(static_cast<unsigned long>(p));
  auto to_mod = [&](const Integer& z) {
    Integer rem;
    mpz_mod(rem.get_mpz_t(), z.get_mpz_t(), pm.get_mpz_t());
    return static_cast<u64>(mpz_get_ui(rem.get_mpz_t()));
  };
  // Streaming elimination: keep a reduced basis of rows seen so far.
  std::vector<std::vector<u64>> basis;
  std::vector<std::size_t> lead;
  std::vector<u64> row(cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const Rational& q = m(i, j);
      if (sgn(q) == 0) {
        row[j] = 0;
        continue;
      }
      const u64 d = to_mod(q.get_den());
      if (d == 0) return std::nullopt;
      row[j] = mulmod(to_mod(q.get_num()), invmod(d, p), p);
    }
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const u64 f = row[lead[k]];
      if (f == 0) continue;
      const auto& b = basis[k];
      for (std::size_t j = lead[k]; j < cols; ++j)
        if (b[j]) row[j] = (row[j] + p - mulmod(f, b[j], p)) % p;
    }
    std::size_t c = 0;
    while (c < cols && row[c] == 0) ++c;
    if (c == cols) continue;
    const u64 inv = invmod(row[c], p);
    for (std::size_t j = c; j < cols; ++j) row[j] = mulmod(row[j], inv, p);
    // Keep the basis fully reduced in column c.
    for (auto& b : basis) {
      const u64 f = b[c];
      if (f == 0) continue;
      for (std::size_t j = c; j < cols; ++j)
        if (row[j]) b[j] = (b[j] + p - mulmod(f, row[j], p)) % p;
    }
    basis.push_back(row);
    lead.push_back(c);
  }
  std::vector<std::size_t> order(basis.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lead[a] < lead[b]; });
  ModKernel out;
  for (std::size_t k : order) out.pivots.push_back(lead[k]);
  for (std::size_t f : free_columns(out.pivots, cols)) {
    std::vector<u64> v(cols, 0);
    v[f] = 1;
    for (std::size_t idx = 0; idx < order.size(); ++idx) {
      const u64 x = basis[order[idx]][f];
      v[out.pivots[idx]] = x ? p - x : 0;
    }
    out.vectors.push_back(std::move(v));
  }
  return out;
}

// Wang's rational reconstruction of a residue modulo `mod`.
std::optional<Rational> reconstruct(const Integer& a, const Integer& mod) {
  Integer bound;
  mpz_fdiv_q_2exp(bound.get_mpz_t(), mod.get_mpz_t(), 1);
  mpz_sqrt(bound.get_mpz_t(), bound.get_mpz_t());
  Integer r0 = mod, r1 = a, t0 = 0, t1 = 1, q, tmp;
  while (r1 > bound) {
    mpz_fdiv_q(q.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
    tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  Integer g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return std::nullopt;
  Rational out(r1, t1);
  out.canonicalize();
  return out;
}

bool annihilates(const QMatrix& m, const QVector& v) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Rational acc = 0;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(v[j]) != 0 && sgn(m(i, j)) != 0) acc += m(i, j) * v[j];
    if (sgn(acc) != 0) return false;
  }
  return true;
}

}  // namespace

std::vector<QVector> kernel_basis_modular(const QMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return kernel_basis(m);
  std::vector<std::size_t> pivots;
  std::vector<std::vector<Integer>> residues;  // CRT-combined entries
  Integer modulus = 0;
  for (u64 p : kPrimes) {
    auto mk = kernel_mod(m, p);
    if (!mk) continue;
    const Integer pz(static_cast<unsigned long>(p));
    if (modulus == 0 || mk->pivots.size() > pivots.size()) {
      // First prime, or the previous primes were unlucky (rank dropped mod p).
      pivots = mk->pivots;
      residues.assign(mk->vectors.size(), std::vector<Integer>(m.cols()));
      for (std::size_t k = 0; k < mk->vectors.size(); ++k)
        for (std::size_t j = 0; j < m.cols(); ++j) residues[k][j] = Integer(static_cast<unsigned long>(mk->vectors[k][j]));
      modulus = pz;
    } else if (mk->pivots != pivots) {
      continue;
    } else {
      // Chinese remaindering: x = r + M * ((v - r) * M^{-1} mod p).
      Integer minv;
      mpz_invert(minv.get_mpz_t(), modulus.get_mpz_t(), pz.get_mpz_t());
      for (std::size_t k = 0; k < residues.size(); ++k)
        for (std::size_t j = 0; j < m.cols(); ++j) {
          Integer v(static_cast<unsigned long>(mk->vectors[k][j]));
          Integer d = (v - residues[k][j]) * minv;
          mpz_mod(d.get_mpz_t(), d.get_mpz_t(), pz.get_mpz_t());
          residues[k][j] += modulus * d;
        }
      modulus *= pz;
    }
    std::vector<QVector> candidate;
    bool ok = true;
    for (const auto& res : residues) {
      QVector v(m.cols());
      for (std::size_t j = 0; j < m.cols() && ok; ++j) {
        if (res[j] == 0) continue;
        auto q = reconstruct(res[j], modulus);
        if (!q) ok = false;
        else v[j] = *q;
      }
      if (!ok || !annihilates(m, v)) {
        ok = false;
        break;
      }
      candidate.push_back(primitive(v));
    }
    // rank over Q >= rank mod p, so a certified kernel of the modular
    // dimension is the whole rational kernel.
    if (ok) return candidate;
  }
  return kernel_basis(m);
}

// ---------------------------------------------------------------------------

Rational determinant(const QMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
  if (m.rows() == 0) return 1;
  Integer scale = 1;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    scale *= l;
  }
  const BareissEchelon e = bareiss_echelon(clear_denominators(m));
  if (e.pivot_cols.size() < m.rows()) return 0;
  Rational d(e.last_pivot, scale);
  d.canonicalize();
  return e.swap_parity ? Rational(-d) : d;
}

QMatrix inverse(const QMatrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("inverse: matrix not square");
  QMatrix a(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = m(i, j);
    a(i, n + i) = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && sgn(a(piv, c)) == 0) ++piv;
    if (piv == n) throw std::domain_error("inverse: singular matrix");
    if (piv != c)
      for (std::size_t j = 0; j < 2 * n; ++j) std::swap(a(piv, j), a(c, j));
    const Rational inv = 1 / a(c, c);
    for (std::size_t j = 0; j < 2 * n; ++j) a(c, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || sgn(a(i, c)) == 0) continue;
      const Rational f = a(i, c);
      for (std::size_t j = 0; j < 2 * n; ++j)
        if (sgn(a(c, j)) != 0) a(i, j) -= f * a(c, j);
    }
  }
  QMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = a(i, n + j);
  return out;
}

SolveResult<Rational> solve_linear(const QMatrix& a, std::span<const Rational> b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_linear: dimension mismatch");
  const std::size_t n = a.cols();
  QMatrix aug(a.rows(), n + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  SolveResult<Rational> out;
  const BareissEchelon e = bareiss_echelon(clear_denominators(aug));
  if (!e.pivot_cols.empty() && e.pivot_cols.back() == n) {
    out.kind = SolveKind::none;
    return out;
  }
  out.particular.assign(n, Rational(0));
  for (std::size_t k = e.pivot_cols.size(); k-- > 0;) {
    const std::size_t pc = e.pivot_cols[k];
    Rational acc(e.rows[k][n]);
    for (std::size_t j = pc + 1; j < n; ++j)
      if (sgn(out.particular[j]) != 0) acc -= Rational(e.rows[k][j]) * out.particular[j];
    out.particular[pc] = acc / Rational(e.rows[k][pc]);
  }
  for (std::size_t f : free_columns(e.pivot_cols, n)) out.kernel.push_back(kernel_vector(e, n, f));
  out.kind = out.kernel.empty() ? SolveKind::unique : SolveKind::family;
  return out;
}

SolveResult<BigFloat> solve_linear(const RMatrix& a, std::span<const BigFloat> b, const ApproxField& field) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_linear: dimension mismatch");
  const std::size_t n = a.cols();
  RMatrix aug(a.rows(), n + 1, field.zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  SolveResult<BigFloat> out;
  const auto pivots = approx_rref(aug, field, n);
  // Rows past the pivot rows carry the inconsistency residual.
  const BigFloat scale = max_abs(b) > field.one() ? max_abs(b) : field.one();
  for (std::size_t i = pivots.size(); i < aug.rows(); ++i) {
    if (abs(aug(i, n)) > field.tolerance * scale) {
      out.kind = SolveKind::none;
      return out;
    }
  }
  if (pivots.size() < n) {
    out.kind = SolveKind::inconclusive;
    return out;
  }
  out.particular.assign(n, field.zero());
  for (std::size_t k = 0; k < pivots.size(); ++k) out.particular[pivots[k]] = aug(k, n);
  out.kind = SolveKind::unique;
  return out;
}

QMatrix stack_rows(const std::vector<QVector>& rows, std::size_t width) {
  return QMatrix::from_rows(rows, width);
}

RMatrix stack_rows(const std::vector<RVector>& rows, std::size_t width) {
  return RMatrix::from_rows(rows, width);
}

}  // namespace leglab
