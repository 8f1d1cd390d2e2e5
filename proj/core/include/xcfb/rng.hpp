#pragma once

#include <complex>
#include <cstdint>

namespace xcfb {

using Complex = std::complex<double>;

// Deterministic random source. The generator is a hand-rolled xoshiro256**
// with a splitmix64 seeding stage and a Box-Muller Gaussian, so streams are
// bit-identical across platforms and standard-library versions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform in [0, 1).
    double uniform();

    // Standard real Gaussian N(0, 1).
    double gaussian();

    // Circularly symmetric complex Gaussian CN(0, 1):
    // real and imaginary parts independent N(0, 1/2).
    Complex cgaussian();

    // Derives the seed of an independent child stream. Used for per-trial
    // seeding: trial_seed = Rng::split(master_seed, trial_index).
    static std::uint64_t split(std::uint64_t master, std::uint64_t index);

  private:
    std::uint64_t state_[4];
    double cached_gaussian_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace xcfb
