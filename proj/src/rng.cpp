#include "leglab/rng.hpp"

#include <stdexcept>

namespace leglab {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next());
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

Rational Rng::rational(std::int64_t height) {
  if (height < 1) throw std::invalid_argument("rational: height must be positive");
  const std::int64_t p = uniform_int(-height, height);
  const std::int64_t q = uniform_int(1, height);
  Rational r(static_cast<long>(p), static_cast<long>(q));
  r.canonicalize();
  return r;
}

BigFloat Rng::unit_float(mpfr_prec_t prec) {
  BigFloat acc(prec);
  // 64 random bits per limb, most significant first.
  for (mpfr_prec_t got = 0; got < prec; got += 64) {
    BigFloat limb(prec);
    mpfr_set_ui_2exp(limb.get(), next(), -64 - got, MPFR_RNDN);
    acc += limb;
  }
  return acc;
}

}  // namespace leglab
