#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "champagne/vec.hpp"

namespace champagne {

/// SplitMix64 finalizer; used only to derive well-separated engine seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent stream for (seed, index). Walks and probes each draw from
/// their own stream, so results do not depend on evaluation order.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

/// Uniform point on the unit sphere S^{d-1} via normalized Gaussians.
template <class Engine>
Vec random_direction(int d, Engine& eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Vec v;
    for (int i = 0; i < d; ++i) v[i] = gauss(eng);
    const double n = norm(v);
    if (n > 1e-300) return v * (1.0 / n);
  }
}

}  // namespace champagne
