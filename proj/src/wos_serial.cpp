#include <algorithm>
#include <cmath>

#include "champagne/wos.hpp"
#include "detail/walk.hpp"

namespace champagne {

Interval wilson(std::uint64_t hits, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double mid = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::clamp(std::min(mid - half, p), 0.0, 1.0), std::clamp(std::max(mid + half, p), 0.0, 1.0)};
}

WosEstimate wos_hit_probability_serial(const Domain& V, const BubbleSet& A, const Vec& start,
                                       const WosOptions& opt) {
  detail::check_start(V, A, start, opt);
  std::uint64_t hits = 0, truncated = 0, steps = 0;
  for (std::uint64_t i = 0; i < opt.samples; ++i) {
    const auto end = detail::walk(V, A, start, opt, i, steps);
    hits += end == detail::WalkEnd::Hit;
    truncated += end == detail::WalkEnd::Truncated;
  }
  return detail::summarize(hits, truncated, steps, opt);
}

}  // namespace champagne
