#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace cdnsim {

// Seeded generator used for every stochastic draw. The engine is
// std::mt19937_64 (bit-exact per the standard); the distributions are
// hand-rolled because the std::*_distribution algorithms are
// implementation-defined and would make runs differ across toolchains.
class Rng {
public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Unbiased draw in [0, bound) by rejection. bound must be > 0.
  uint64_t uniform_u64(uint64_t bound);

  // Integer in [lo, hi], both inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi);

  // Double in [0, 1) with 53 random bits.
  double uniform01();

  // Standard normal via Box-Muller; draws a fresh pair per call so the
  // stream position never depends on call parity.
  double normal();

  // Stable per-activity seed derivation from a master seed and a name.
  static uint64_t derive_seed(uint64_t master, const std::string& name);

private:
  std::mt19937_64 engine_;
};

struct PoissonParams {
  double lambda = 0.0;
};

// Poisson draw: Knuth's product method for lambda <= 30, rounded normal
// approximation clamped at zero above that.
uint64_t poisson_sample(const PoissonParams& params, Rng& rng);
inline uint64_t poisson_sample(double lambda, Rng& rng) {
  return poisson_sample(PoissonParams{lambda}, rng);
}

}  // namespace cdnsim
