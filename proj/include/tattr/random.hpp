#pragma once

#include <cmath>
#include <cstdint>

#include "tattr/error.hpp"
#include "tattr/types.hpp"

namespace tattr {

/// Counter-based splitmix64 stream. The k-th output is a pure function of
/// (seed, k), so equal seeds give bit-identical streams on every platform.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;
};

inline std::uint64_t next_u64(RngState& rng) {
  std::uint64_t z = rng.seed + (++rng.counter) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Uniform in [0, 1), 53-bit resolution.
inline double next_uniform(RngState& rng) {
  return static_cast<double>(next_u64(rng) >> 11) * 0x1.0p-53;
}

/// Uniform in [lo, hi).
inline double next_uniform(RngState& rng, double lo, double hi) {
  return lo + (hi - lo) * next_uniform(rng);
}

/// Uniform integer in [0, n).
inline std::uint64_t next_below(RngState& rng, std::uint64_t n) {
  return next_u64(rng) % n;
}

/// One standard-normal draw via the basic Box-Muller transform. Each draw
/// consumes exactly two uniforms (the sine branch is discarded), which keeps
/// the stream position a pure function of the draw count.
inline double next_gaussian(RngState& rng) {
  const double u1 = static_cast<double>((next_u64(rng) >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  const double u2 = next_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

struct GaussianSpec {
  double mean = 0.0;
  double sigma = 1.0;
};

/// n i.i.d. draws from N(mean, sigma^2). Advances rng by 2n uniforms.
inline FeatureVector sample_gaussian_vector(RngState& rng, const GaussianSpec& spec, int n) {
  if (spec.sigma <= 0.0) throw ParameterError("gaussian sigma must be > 0, got " + std::to_string(spec.sigma));
  if (n < 1) throw ParameterError("sample count must be >= 1, got " + std::to_string(n));
  FeatureVector v(n);
  for (int i = 0; i < n; ++i) v[i] = spec.mean + spec.sigma * next_gaussian(rng);
  return v;
}

}  // namespace tattr
