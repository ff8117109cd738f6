#include "cdnsim/random.hpp"

#include <cmath>

#include "cdnsim/error.hpp"
#include "cdnsim/util.hpp"

namespace cdnsim {

uint64_t Rng::uniform_u64(uint64_t bound) {
  if (bound == 0) {
    throw Error("invalid-bound", "uniform_u64 bound must be positive");
  }
  // Rejection sampling on the top of the range keeps the draw unbiased.
  uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % bound;
}

int64_t Rng::uniform_int(int64_t lo, int64_t hi) {
  if (lo > hi) {
    throw Error("invalid-bound", "uniform_int range is inverted");
  }
  uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
  if (span == 0) {  // full 64-bit range
    return static_cast<int64_t>(engine_());
  }
  return lo + static_cast<int64_t>(uniform_u64(span));
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  double u1 = uniform01();
  double u2 = uniform01();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

uint64_t Rng::derive_seed(uint64_t master, const std::string& name) {
  // splitmix64 finalizer over master xor name hash.
  uint64_t z = master ^ fnv1a64(name);
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

uint64_t poisson_sample(const PoissonParams& params, Rng& rng) {
  double lambda = params.lambda;
  if (lambda < 0.0 || !std::isfinite(lambda)) {
    throw Error("invalid-lambda", "Poisson lambda must be finite and >= 0");
  }
  if (lambda == 0.0) {
    return 0;
  }
  if (lambda <= 30.0) {
    // Knuth: multiply uniforms until the product drops below exp(-lambda).
    double limit = std::exp(-lambda);
    uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= rng.uniform01();
    } while (p > limit);
    return k - 1;
  }
  double draw = std::llround(lambda + std::sqrt(lambda) * rng.normal());
  return draw < 0.0 ? 0 : static_cast<uint64_t>(draw);
}

}  // namespace cdnsim
