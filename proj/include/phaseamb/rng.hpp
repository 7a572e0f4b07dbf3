#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace phaseamb {

inline std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// mt19937_64 with splitmix64-derived stream seeding, so (seed, stream) pairs
// give independent reproducible sequences. Uniform doubles are built from the
// top 53 bits directly; std::uniform_real_distribution is avoided because its
// output is not pinned down by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t state = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    const std::uint64_t a = splitmix64_next(state);
    const std::uint64_t b = splitmix64_next(state);
    gen_.seed(a ^ (b << 1));
  }

  std::uint64_t next() { return gen_(); }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  // Log-uniform in [lo, hi); both bounds must be positive.
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  bool coin() { return (next() & 1ull) != 0; }

  // Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace phaseamb
