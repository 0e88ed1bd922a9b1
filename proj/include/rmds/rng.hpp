#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace rmds {

/// Seedable generator with samplers that are deterministic across standard
/// library implementations: mt19937_64 for the bit stream, explicit
/// conversions for the distributions (the std:: distributions are not
/// portable). Box-Muller output can differ in the last ulp across libm
/// builds; reruns on one machine are bit-identical.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 significant bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// N(0, sigma^2) via Box-Muller; consumes exactly two draws.
  double normal(double sigma) {
    const double u1 = 1.0 - uniform01();  // in (0, 1]
    const double u2 = uniform01();
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Integer in [0, bound); bias is O(bound / 2^53), negligible here.
  int below(int bound) {
    return static_cast<int>(uniform01() * static_cast<double>(bound));
  }

  /// Partial Fisher-Yates: `count` distinct indices from [0, population).
  std::vector<int> sample_without_replacement(int count, int population) {
    if (count < 0 || count > population) {
      throw std::invalid_argument("sample_without_replacement: bad count");
    }
    std::vector<int> idx(static_cast<std::size_t>(population));
    std::iota(idx.begin(), idx.end(), 0);
    for (int k = 0; k < count; ++k) {
      const int pick = k + below(population - k);
      std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(pick)]);
    }
    idx.resize(static_cast<std::size_t>(count));
    return idx;
  }

  /// Derives an independent stream for (seed, a, b): one splitmix64 round
  /// per component. Used to give every sweep cell / trial its own stream.
  static std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a,
                                     std::uint64_t b = 0) {
    std::uint64_t x = mix(seed + 0x9E3779B97F4A7C15ull);
    x = mix(x ^ (a + 0x9E3779B97F4A7C15ull));
    x = mix(x ^ (b + 0x9E3779B97F4A7C15ull));
    return x;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace rmds
