#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace bdris {

// splitmix64 finalizer. Used both for seed whitening and for deriving
// per-trial child seeds.
std::uint64_t mix64(std::uint64_t x);

// Stable child-seed derivation for Monte-Carlo trials:
//   child = mix64(mix64(mix64(master) ^ (K_SWEEP + sweep)) ^ (K_TRIAL + trial))
// The trial index enters only in the last stage, so adding trials or sweep
// points never perturbs seeds that already exist.
inline constexpr std::uint64_t K_SWEEP = 0xa0761d6478bd642fULL;
inline constexpr std::uint64_t K_TRIAL = 0xe7037ed1a0b428dbULL;
std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t sweep_index,
                         std::uint64_t trial_index);

// Deterministic random source. The variate recipes (53-bit uniform,
// Box-Muller normal) are spelled out here instead of delegating to
// std::*_distribution so that a fixed seed produces the same stream on
// every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform on {0, 1, ..., n-1} by rejection (unbiased).
  std::uint64_t below(std::uint64_t n);

  // Standard normal via Box-Muller; caches the second variate.
  double gauss();

  // Standard circularly-symmetric complex normal, E|z|^2 = 1.
  std::complex<double> cgauss() {
    return {gauss() * M_SQRT1_2, gauss() * M_SQRT1_2};
  }

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace bdris
