#include "champagne/wos.hpp"
#include "detail/walk.hpp"

namespace champagne {

WosEstimate wos_hit_probability(const Domain& V, const BubbleSet& A, const Vec& start,
                                const WosOptions& opt) {
  detail::check_start(V, A, start, opt);
  std::uint64_t hits = 0, truncated = 0, steps = 0;
  const auto n = static_cast<long long>(opt.samples);
#pragma omp parallel for schedule(dynamic, 256) reduction(+ : hits, truncated, steps)
  for (long long i = 0; i < n; ++i) {
    const auto end = detail::walk(V, A, start, opt, static_cast<std::uint64_t>(i), steps);
    hits += end == detail::WalkEnd::Hit;
    truncated += end == detail::WalkEnd::Truncated;
  }
  return detail::summarize(hits, truncated, steps, opt);
}

}  // namespace champagne
