#include "champagne/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "champagne/error.hpp"
#include "champagne/gauge.hpp"
#include "champagne/rng.hpp"
#include "champagne/sphere_design.hpp"

namespace champagne {

std::uint64_t KappaEstimate::samples() const {
  std::uint64_t n = 0;
  for (const auto& e : per_probe) n += e.n_samples;
  return n;
}

std::vector<Vec> sphere_probes(int d, int n, double radius, const Vec& center, std::uint64_t seed) {
  if (n < 1) throw DomainError("sphere_probes: need at least one probe");
  std::vector<Vec> out;
  if (d == 2) {
    auto eng = substream(seed, 0x9b);
    const double step = 2.0 * std::numbers::pi / n;
    const double phase = std::uniform_real_distribution<double>(0.0, step)(eng);
    for (int i = 0; i < n; ++i) {
      const double t = phase + step * i;
      out.push_back(center + radius * make_vec({std::cos(t), std::sin(t)}));
    }
    return out;
  }
  for (const auto& p : quasi_uniform_sphere(d, static_cast<std::size_t>(n), radius, seed)) {
    out.push_back(center + p);
  }
  return out;
}

KappaEstimate kappa_from_probes(const Domain& V, const BubbleSet& A, const std::vector<Vec>& probes,
                                const WosOptions& opt) {
  KappaEstimate k;
  k.probes = probes;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    WosOptions o = opt;
    o.seed = mix64(opt.seed + i);
    const auto e = wos_hit_probability(V, A, probes[i], o);
    if (k.argmin < 0 || e.p_hat < k.kappa) {
      k.kappa = e.p_hat;
      k.argmin = static_cast<int>(i);
    }
    k.kappa_low = i == 0 ? e.ci_low : std::min(k.kappa_low, e.ci_low);
    k.kappa_high = i == 0 ? e.ci_high : std::min(k.kappa_high, e.ci_high);
    k.per_probe.push_back(e);
  }
  return k;
}

KappaEstimate layer_kappa_estimate(const SphereLayer& layer, int d, int probes,
                                   const WosOptions& opt, double scale, const Vec& center) {
  if (!layer.materialized()) throw BuildError("kappa: layer is implicit");
  BubbleSet A(d);
  Shell s;
  s.origin = center;
  s.scale = scale;
  s.local_R = layer.R;
  s.bubble_radius = std::exp(-(layer.depth - std::log(scale)));
  s.layer_id = layer.index;
  s.placement = 0;
  s.local = layer.grid;
  A.add_shell(std::move(s));
  A.finalize();

  const Domain V = Domain::ball(center, scale * (layer.R + 2.0 * layer.rho), d);
  const double radius = scale * (layer.R + layer.rho);
  auto pts = sphere_probes(d, probes, radius, center, opt.seed ^ 0x5eedULL);
  auto eng = substream(opt.seed, 0x7e);
  for (auto& p : pts) {
    while (!(A.nearest(p).distance > opt.epsilon)) {
      p = center + radius * random_direction(d, eng);
    }
  }
  return kappa_from_probes(V, A, pts, opt);
}

KappaEstimate layer_kappa_estimate(const ChampagneConfig& cfg, int layer_index, int probes,
                                   const WosOptions& opt) {
  if (cfg.placements.empty()) throw DomainError("kappa: config has no placements");
  const auto& p = cfg.placements.front();
  for (const auto& L : cfg.stacks.at(static_cast<std::size_t>(p.stack)).layers) {
    if (L.index == layer_index) return layer_kappa_estimate(L, cfg.d, probes, opt, p.scale, p.center);
  }
  throw DomainError("kappa: no layer " + std::to_string(layer_index));
}

ReferenceKappa reference_annulus_kappa(const GaugeSet& gauges, double a, double delta_y, int layers,
                                       int probes, const WosOptions& opt, const BuildOptions& build) {
  ReferenceKappa ref;
  ref.stack = make_annulus_stack_layers(layers, a, a * 6.0 / 7.0, delta_y, gauges, opt.seed, build);
  for (const auto& L : ref.stack.layers) {
    WosOptions o = opt;
    o.seed = mix64(opt.seed + static_cast<std::uint64_t>(L.index));
    if (!(opt.epsilon > 0.0)) o.epsilon = 1e-3 * std::exp(-(L.depth - std::log(a)));
    auto k = layer_kappa_estimate(L, gauges.d(), probes, o, a);
    ref.kappa_low = ref.layers.empty() ? k.kappa_low : std::min(ref.kappa_low, k.kappa_low);
    ref.layers.push_back(std::move(k));
  }
  return ref;
}

ReferenceKappa general_reference_kappa(const Exhaustion& exhaustion, const GaugeSet& gauges,
                                       double delta, int layers, int probes, const WosOptions& opt,
                                       std::uint64_t build_seed, const BuildOptions& build) {
  if (exhaustion.size() == 0) throw DomainError("kappa: empty exhaustion");
  const std::size_t N = exhaustion.size();
  const double dn = exhaustion.gaps[N - 1];
  const auto Y = choose_annulus_centers(exhaustion.levels[N - 1], dn,
                                        mix64(build_seed ^ static_cast<std::uint64_t>(N)));
  const double delta_y = delta / (static_cast<double>(Y.size()) * std::ldexp(1.0, static_cast<int>(N)));
  return reference_annulus_kappa(gauges, dn / 6.0, delta_y, layers, probes, opt, build);
}

double one_bubble_minorant(double depth, double dist, double beta, int d) {
  return capacity_phi_depth(depth, d) * (kernel_N(dist, d) - kernel_N(3.0 * beta, d));
}

UnavoidabilityReport unavoidability_report(const ChampagneConfig& cfg, int K, int probes,
                                           const WosOptions& kappa_opt,
                                           const WosOptions& direct_opt, const Vec& start) {
  if (cfg.placements.empty()) throw DomainError("report: config has no placements");
  UnavoidabilityReport rep;
  const auto& p = cfg.placements.front();
  std::vector<double> kappas, sigmas;
  for (const auto& L : cfg.stacks.at(static_cast<std::size_t>(p.stack)).layers) {
    if (L.index > K) continue;
    LayerReportRow row;
    row.layer = L.index;
    row.R = L.R;
    row.rho = L.rho;
    row.r = L.r();
    row.count = L.count;
    row.capacity_sum = L.capacity_sum;
    row.weighted_sum = L.weighted_sum;
    WosOptions o = kappa_opt;
    o.seed = mix64(kappa_opt.seed + static_cast<std::uint64_t>(L.index));
    row.kappa = layer_kappa_estimate(L, cfg.d, probes, o, p.scale, p.center);
    kappas.push_back(row.kappa.kappa);
    sigmas.push_back(row.kappa.sigma());
    rep.rows.push_back(std::move(row));
  }
  rep.ladder = ladder_bound(kappas);
  double var = 0.0;
  for (std::size_t j = 0; j < kappas.size(); ++j) {
    double others = 1.0;
    for (std::size_t i = 0; i < kappas.size(); ++i) {
      if (i != j) others *= 1.0 - kappas[i];
    }
    var += others * others * sigmas[j] * sigmas[j];
  }
  rep.ladder_sigma = std::sqrt(var);
  rep.start = start;
  rep.direct = wos_hit_probability(cfg.domain, cfg.bubble_set(K), start, direct_opt);
  rep.margin = 3.0 * std::sqrt(rep.direct.sigma() * rep.direct.sigma() + var);
  rep.consistent = rep.direct.p_hat >= rep.ladder - rep.margin;
  return rep;
}

}  // namespace champagne
