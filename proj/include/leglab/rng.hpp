#pragma once

#include <cstdint>
#include <random>

#include "leglab/scalar.hpp"

namespace leglab {

// splitmix64 finalizer; used to derive independent sub-streams from a seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

// Seeded generator with bit-stable output on every platform. The standard
// distributions are implementation-defined, so bounded draws are done here by
// rejection on the raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // p/q with |p| <= height and 1 <= q <= height.
  Rational rational(std::int64_t height);
  // Uniform in [0,1) at the given precision.
  BigFloat unit_float(mpfr_prec_t prec);

 private:
  std::mt19937_64 engine_;
};

}  // namespace leglab
