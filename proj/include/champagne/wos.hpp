#pragma once

// Walk-on-spheres estimates of hitting probabilities H_{V \ A} 1_A(z).

#include <cstdint>

#include "champagne/bubbles.hpp"
#include "champagne/geometry.hpp"
#include "champagne/vec.hpp"

namespace champagne {

inline constexpr double kWilsonZ = 1.959964;

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// 95% Wilson score interval for `hits` successes out of `n`.
Interval wilson(std::uint64_t hits, std::uint64_t n, double z = kWilsonZ);

struct WosEstimate {
  double p_hat = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t hits = 0;
  std::uint64_t truncated = 0;  // walks stopped by the step cap (counted as exits)
  double epsilon = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  double mean_steps = 0.0;
  std::uint64_t seed = 0;

  double half_width() const { return 0.5 * (ci_high - ci_low); }
  /// Standard error implied by the interval.
  double sigma() const { return half_width() / kWilsonZ; }
};

struct WosOptions {
  double epsilon = 1e-4;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  std::uint64_t max_steps = 10000000;
};

/// Parallel estimate (OpenMP). Sample i draws from substream(seed, i) and
/// totals are integer sums, so the result matches the serial kernel exactly.
WosEstimate wos_hit_probability(const Domain& V, const BubbleSet& A, const Vec& start,
                                const WosOptions& opt);

/// Single-threaded reference kernel.
WosEstimate wos_hit_probability_serial(const Domain& V, const BubbleSet& A, const Vec& start,
                                       const WosOptions& opt);

}  // namespace champagne
