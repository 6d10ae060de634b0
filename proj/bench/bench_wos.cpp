// Serial vs OpenMP walk-on-spheres kernels on the same inputs.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "champagne/builder.hpp"
#include "champagne/wos.hpp"

using namespace champagne;

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int compare(const char* name, const Domain& V, const BubbleSet& A, const Vec& start, const WosOptions& opt) {
  WosEstimate serial, parallel;
  const double ts = seconds([&] { serial = wos_hit_probability_serial(V, A, start, opt); });
  const double tp = seconds([&] { parallel = wos_hit_probability(V, A, start, opt); });
  const bool same = serial.hits == parallel.hits && serial.mean_steps == parallel.mean_steps;
  std::printf("%-22s samples=%llu threads=%d serial=%.3fs omp=%.3fs speedup=%.2f p=%.5f identical=%s\n",
              name, static_cast<unsigned long long>(opt.samples), omp_get_max_threads(), ts, tp,
              ts / tp, parallel.p_hat, same ? "yes" : "no");
  return same ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t samples = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20000;
  int status = 0;

  BubbleSet single(2);
  single.add_bubble(Bubble{Vec{}, 1.0 / 7.0, 0});
  single.finalize();
  WosOptions opt;
  opt.samples = samples;
  opt.epsilon = 1e-4;
  opt.seed = 7;
  status |= compare("annulus d=2", Domain::ball(Vec{}, 1.0, 2), single, make_vec({0.5, 0.0}), opt);

  const GaugeSet gauges(2, Gauge::power(2.0));
  const auto radii = radii_geometric(4);
  const auto cfg = build_unit_ball(gauges, 1e-3, radii, 3);
  const auto bubbles = cfg.bubble_set();
  double rmin = 1.0;
  for (const auto& L : cfg.stacks[0].layers) rmin = std::min(rmin, L.r());
  opt.epsilon = 1e-3 * rmin;
  opt.samples = samples / 4;
  status |= compare("unit ball K=4 d=2", cfg.domain, bubbles, Vec{}, opt);
  return status;
}
