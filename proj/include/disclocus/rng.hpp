#ifndef DISCLOCUS_RNG_HPP
#define DISCLOCUS_RNG_HPP

#include "disclocus/numcore.hpp"

#include <cstdint>
#include <random>

namespace disclocus {

using Rng = std::mt19937_64;

// Sub-seeds: stream(seed, a, b, ...) folds each counter through splitmix64,
// so (master seed, job index) pairs map to independent generators.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed) { return splitmix64(seed); }

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter, Rest... rest) {
  return derive_seed(splitmix64(seed ^ splitmix64(counter + 0x632BE59BD9B4E019ull)), rest...);
}

template <typename... Counters>
Rng make_rng(std::uint64_t seed, Counters... counters) {
  return Rng(derive_seed(seed, static_cast<std::uint64_t>(counters)...));
}

/// Stream tags used as the first counter so different pipeline stages never
/// share a generator.
enum class Stream : std::uint64_t {
  GenericStart = 1,
  CriticalStart = 2,
  Uniform = 3,
  Line = 4,
  Label = 5,
  Query = 6,
  Train = 7,
  Witness = 8,
  RealSolve = 9,
};

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline double gaussian(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

inline Complex complex_gaussian(Rng& rng) {
  const double re = gaussian(rng);
  const double im = gaussian(rng);
  return {re, im};
}

inline CVec complex_gaussian_vector(Rng& rng, Eigen::Index n) {
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_gaussian(rng);
  return v;
}

/// Uniform on the unit circle, rejecting angles within 1e-3 of +1 and -1.
inline Complex random_gamma(Rng& rng) {
  constexpr double kPi = 3.14159265358979323846;
  for (;;) {
    const double theta = 2.0 * kPi * uniform01(rng);
    const Complex g = std::polar(1.0, theta);
    if (std::abs(g - 1.0) > 1e-3 && std::abs(g + 1.0) > 1e-3) return g;
  }
}

}  // namespace disclocus

#endif  // DISCLOCUS_RNG_HPP
