#pragma once

#include <cstdint>

#include "champagne/bubbles.hpp"
#include "champagne/error.hpp"
#include "champagne/geometry.hpp"
#include "champagne/rng.hpp"
#include "champagne/wos.hpp"

namespace champagne::detail {

enum class WalkEnd { Hit, Exit, Truncated };

inline void check_start(const Domain& V, const BubbleSet& A, const Vec& start,
                        const WosOptions& opt) {
  if (!(opt.epsilon > 0.0)) throw DomainError("wos: epsilon must be positive");
  if (opt.samples == 0) throw DomainError("wos: need at least one sample");
  if (!(V.signed_distance(start) < 0.0)) throw DomainError("wos: start is not inside V");
  if (!A.empty() && !(A.nearest(start).distance > 0.0)) {
    throw DomainError("wos: start lies inside an obstacle");
  }
}

inline WalkEnd walk(const Domain& V, const BubbleSet& A, const Vec& start, const WosOptions& opt,
                    std::uint64_t index, std::uint64_t& steps) {
  auto eng = substream(opt.seed, index);
  const int d = V.d();
  Vec x = start;
  for (std::uint64_t s = 0; s < opt.max_steps; ++s) {
    const double to_boundary = -V.signed_distance(x);
    bool obstacle = false;
    const double step = A.empty() ? to_boundary : A.step_bound(x, to_boundary, obstacle);
    if (step < opt.epsilon) {
      steps += s;
      return obstacle ? WalkEnd::Hit : WalkEnd::Exit;
    }
    x += step * random_direction(d, eng);
  }
  steps += opt.max_steps;
  return WalkEnd::Truncated;
}

inline WosEstimate summarize(std::uint64_t hits, std::uint64_t truncated, std::uint64_t steps,
                             const WosOptions& opt) {
  WosEstimate e;
  e.n_samples = opt.samples;
  e.hits = hits;
  e.truncated = truncated;
  e.epsilon = opt.epsilon;
  e.seed = opt.seed;
  e.p_hat = static_cast<double>(hits) / static_cast<double>(opt.samples);
  const auto ci = wilson(hits, opt.samples);
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  e.mean_steps = static_cast<double>(steps) / static_cast<double>(opt.samples);
  return e;
}

}  // namespace champagne::detail
