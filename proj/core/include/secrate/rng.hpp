#pragma once

#include <cmath>
#include <cstdint>

namespace secrate {

// splitmix64 (Steele, Lea, Flood). Tiny state, full 64-bit avalanche per
// step, good enough statistics for Monte Carlo integration and key
// material generation in a simulator.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1): the top 52 bits plus a half-ulp
  // offset, so log(u) and log1p(-u) are always finite.
  double uniform01() {
    return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52;
  }

  // Standard normal via Box-Muller (cosine branch only; we never need
  // draws in bulk enough for the discarded sine branch to matter).
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t state_;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace detail

// Derives a statistically independent stream seed from (seed, stream, index).
// Counter-based: the draw for a given index never depends on how many other
// indices were sampled or in which order, which makes samplers pure
// functions and lets distinct policies or sweep points share identical
// channel realizations.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t index) {
  std::uint64_t h = detail::mix64(seed ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
  return detail::mix64(h ^ (0xD1B54A32D192ED03ull * (index + 1)));
}

// Stream ids used across the library. Keeping them in one place guarantees
// two modules never alias each other's randomness for the same user seed.
enum : std::uint64_t {
  kStreamGainMain = 1,
  kStreamGainEaves = 2,
  kStreamKeyMaterial = 3,
  kStreamPayload = 4,
  kStreamPlanning = 5,
};

}  // namespace secrate
