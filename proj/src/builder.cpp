#include "champagne/builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "champagne/error.hpp"
#include "champagne/format.hpp"
#include "champagne/rng.hpp"
#include "champagne/sphere_design.hpp"

namespace champagne {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

double log2_term(double j) {
  const double l = std::log(j);
  return 1.0 / (j * l * l);
}

// Deepest admissible log(1/r): r must stay a normal double for d >= 3; for
// d = 2 only log(1/r) itself has to be finite.
double depth_floor(int d) { return d == 2 ? 1e300 : 700.0; }

SphereLayer make_layer(double R, double rho, double depth, const GaugeSet& gauges,
                       std::uint64_t seed, const BuildOptions& opt, double scale) {
  const int d = gauges.d();
  SphereLayer L;
  L.R = R;
  L.rho = rho;
  L.depth = depth;
  L.beta = layer_beta(depth, rho, d);
  L.seed = seed;
  if (!(-depth < std::log(L.beta / 3.0))) {
    throw InvariantViolation("layer: r = exp(-" + shortest(depth) + ") is not below beta/3 = " +
                             shortest(L.beta / 3.0));
  }
  if (!(L.beta < 2.0 * R)) throw BuildError("layer: beta >= 2R, sphere too small for the spacing");
  const double bound = design_count_bound(R, L.beta, d);
  if (bound <= opt.max_points) {
    DesignOptions dopt;
    dopt.covering_samples = opt.covering_samples;
    dopt.max_points = opt.max_points;
    const auto ps = design_sphere_points(R, L.beta, d, seed, dopt);
    L.grid = std::make_shared<PointGrid>(d, L.beta, ps.points);
    L.count = static_cast<double>(ps.points.size());
    L.count_exact = true;
    L.covering_radius = ps.covering_radius_measured;
    L.min_separation = ps.min_pairwise_distance;
  } else {
    L.count = bound;
    L.count_exact = d == 2 && bound < 9.0e15;
  }
  const double ds = depth - std::log(scale);
  L.capacity_sum = L.count * capacity_phi_depth(ds, d);
  L.weighted_sum = L.capacity_sum * gauges.majorant_depth(ds);
  return L;
}

double layer_weight_estimate(double R, double rho, double depth, double scale,
                             const GaugeSet& gauges) {
  const int d = gauges.d();
  const double beta = layer_beta(depth, rho, d);
  if (!(beta < 2.0 * R)) return std::numeric_limits<double>::infinity();
  const double ds = depth - std::log(scale);
  return design_count_bound(R, beta, d) * capacity_phi_depth(ds, d) * gauges.majorant_depth(ds);
}

// Searches log(1/r) from just below `cap` until the layer budget holds:
// halve r `halving_steps` times, then square r until the floor.
SphereLayer budgeted_layer(int k, double R, double rho, double cap, double scale, double target,
                           const GaugeSet& gauges, std::uint64_t seed, const BuildOptions& opt) {
  const int d = gauges.d();
  const double floor = depth_floor(d);
  double depth = std::log(1.0 / cap) * (1.0 + 1e-12) + 1e-12;
  int steps = 0;
  auto deepen = [&] {
    depth = steps < opt.halving_steps ? depth + kLn2 : depth * 2.0;
    ++steps;
    if (!(depth <= floor)) {
      throw BuildError("layer " + std::to_string(k) +
                       ": no admissible r above the floating-point floor");
    }
  };
  for (;;) {
    while (!(layer_weight_estimate(R, rho, depth, scale, gauges) < target)) deepen();
    SphereLayer L = make_layer(R, rho, depth, gauges, seed, opt, scale);
    L.index = k;
    if (L.weighted_sum < target) return L;
    deepen();
  }
}

void check_radii(std::span<const double> radii) {
  if (radii.size() < 2) throw DomainError("radii: need at least two radii");
  double prev = 0.5;
  for (double R : radii) {
    if (!(R > prev && R < 1.0)) {
      throw DomainError("radii: must be strictly increasing in (1/2, 1)");
    }
    prev = R;
  }
}

double placement_weight(const LayerStack& stack, double scale, const Gauge& h, int d) {
  double w = 0.0;
  for (const auto& L : stack.layers) {
    const double ds = L.depth - std::log(scale);
    w += L.count * capacity_phi_depth(ds, d) * h.at_depth(ds, d);
  }
  return w;
}

}  // namespace

double SphereLayer::r() const { return std::exp(-depth); }

void ChampagneConfig::seal() {
  total_weighted_sum = 0.0;
  for (auto& p : placements) {
    p.weighted_sum = placement_weight(stacks.at(static_cast<std::size_t>(p.stack)), p.scale, gauge, d);
    total_weighted_sum += p.weighted_sum;
  }
  for (const auto& b : loose) total_weighted_sum += capacity_phi(b.radius, d) * gauge(b.radius, d);
}

BubbleSet ChampagneConfig::bubble_set(std::optional<int> max_layer) const {
  BubbleSet bs(d);
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const auto& p = placements[i];
    for (const auto& L : stacks.at(static_cast<std::size_t>(p.stack)).layers) {
      if (max_layer && L.index > *max_layer) continue;
      if (!L.materialized()) {
        throw BuildError("layer " + std::to_string(L.index) +
                         " is implicit (too many bubbles to materialize)");
      }
      Shell s;
      s.origin = p.center;
      s.scale = p.scale;
      s.local_R = L.R;
      s.bubble_radius = std::exp(-(L.depth - std::log(p.scale)));
      s.layer_id = L.index;
      s.placement = static_cast<int>(i);
      s.local = L.grid;
      bs.add_shell(std::move(s));
    }
  }
  for (const auto& b : loose) bs.add_bubble(b);
  bs.finalize();
  return bs;
}

double ChampagneConfig::bubble_count() const {
  double n = static_cast<double>(loose.size());
  for (const auto& p : placements) {
    for (const auto& L : stacks.at(static_cast<std::size_t>(p.stack)).layers) n += L.count;
  }
  return n;
}

double rho0_threshold(double rho, int d) {
  if (d < 2) throw DomainError("rho0_threshold: d must be >= 2");
  if (!(rho > 0.0 && rho < 1.0 / 3.0)) throw DomainError("rho0_threshold: rho must lie in (0, 1/3)");
  if (d == 2) return std::min(rho / 3.0, rho * rho / 18.0);
  return std::min(rho / 3.0, std::pow(3.0, 1 - d) * rho);
}

double layer_beta(double depth, double rho, int d) {
  if (d == 2) return rho / depth;
  return std::exp((std::log(rho) - (d - 2) * depth) / (d - 1));
}

SphereLayer build_layer(double R, double rho, double r, const GaugeSet& gauges, std::uint64_t seed,
                        const BuildOptions& opt) {
  if (!(R > 0.0)) throw DomainError("build_layer: R must be positive");
  const double rho0 = rho0_threshold(rho, gauges.d());
  if (!(r > 0.0)) throw DomainError("build_layer: r must be positive");
  if (!(r < rho0)) {
    throw BuildError("build_layer: r = " + shortest(r) + " violates r < rho0 = " + shortest(rho0));
  }
  return make_layer(R, rho, std::log(1.0 / r), gauges, seed, opt, 1.0);
}

SphereLayer build_layer_depth(double R, double rho, double depth, const GaugeSet& gauges,
                              std::uint64_t seed, const BuildOptions& opt, double scale) {
  if (!(R > 0.0)) throw DomainError("build_layer: R must be positive");
  const double rho0 = rho0_threshold(rho, gauges.d());
  if (!(depth > std::log(1.0 / rho0))) {
    throw BuildError("build_layer: log(1/r) = " + shortest(depth) + " violates r < rho0 = " +
                     shortest(rho0));
  }
  return make_layer(R, rho, depth, gauges, seed, opt, scale);
}

double log2_tail(int k) {
  if (k < 2) throw DomainError("log2_tail: k must be >= 2");
  // Explicit terms up to J, then the integral 1/log J with Euler-Maclaurin corrections.
  const long J = static_cast<long>(k) + 200000;
  double s = 0.0;
  for (long j = J - 1; j >= k; --j) s += log2_term(static_cast<double>(j));
  const double x = static_cast<double>(J);
  const double l = std::log(x);
  const double fprime = -(l + 2.0) / (x * x * l * l * l);
  return s + 1.0 / l + 0.5 * log2_term(x) - fprime / 12.0;
}

OneBubbleCheck check_one_bubble_start(int K, int d) {
  if (K < 2) return {false, "k >= 2 required"};
  if (K < std::pow(3.0, d - 1)) return {false, "k >= 3^{d-1} fails"};
  if (!(log2_tail(K) < 0.5)) return {false, "tail sum sum_{j>=k} (j log^2 j)^{-1} < 1/2 fails"};
  const double l = std::log(static_cast<double>(K));
  if (!(-static_cast<double>(K) < -std::log(9.0 * K * l * l))) {
    return {false, "e^{-k} < (9 k log^2 k)^{-1} fails"};
  }
  return {};
}

ChampagneConfig build_one_bubble_sequence(int K, int K_max, int d, double eps, std::uint64_t seed,
                                          const BuildOptions& opt) {
  if (d < 2 || d > kMaxDim) throw DomainError("one-bubble: unsupported dimension");
  if (K_max < K) throw DomainError("one-bubble: empty k range");
  if (!(eps >= 0.0)) throw DomainError("one-bubble: eps must be >= 0");
  const auto check = check_one_bubble_start(K, d);
  if (!check.ok) throw BuildError("one-bubble: k = " + std::to_string(K) + ": " + check.failure);

  const GaugeSet gauges(d, Gauge::phi_power(eps));
  ChampagneConfig cfg;
  cfg.d = d;
  cfg.domain = Domain::ball(Vec{}, 1.0, d);
  cfg.gauge = gauges.h();
  cfg.delta = 0.0;
  cfg.clearance_factor = 9.0;
  cfg.builder = "one-bubble";
  cfg.seed = seed;

  LayerStack stack;
  double tail = log2_tail(K);
  double power_sum = 0.0;
  bool phi_ok = true;
  for (int k = K; k <= K_max; ++k) {
    const double kk = static_cast<double>(k);
    const double lk = std::log(kk);
    const double R = 1.0 - tail;
    const double rho = 1.0 / (3.0 * lk * lk);
    const double depth = d == 2 ? kk : (d - 1.0) / (d - 2.0) * lk - std::log(rho);
    SphereLayer L = make_layer(R, rho, depth, gauges, mix64(seed + static_cast<std::uint64_t>(k)),
                               opt, 1.0);
    L.index = k;
    if (!(std::exp(-depth) / (1.0 - R) < 1.0 / 9.0)) {
      throw BuildError("one-bubble: layer " + std::to_string(k) + " violates r_k/(1-R_k) < 1/9");
    }
    const double log_phi = std::log(capacity_phi_depth(depth, d));
    phi_ok = phi_ok && log_phi <= (1.0 - d) * lk + 1e-12;
    power_sum += L.count * std::exp((1.0 + eps) * log_phi);
    stack.layers.push_back(std::move(L));
    tail -= log2_term(kk);
  }
  cfg.stacks.push_back(std::move(stack));
  cfg.placements.push_back(Placement{0, Vec{}, 1.0, 0, 0.0, 0.0});
  cfg.params["k_min"] = std::to_string(K);
  cfg.params["k_max"] = std::to_string(K_max);
  cfg.params["eps"] = shortest(eps);
  cfg.params["power_sum"] = shortest(power_sum);
  cfg.params["phi_le_k_pow_1_minus_d"] = phi_ok ? "true" : "false";
  cfg.seal();
  return cfg;
}

std::vector<double> radii_geometric(int K) {
  if (K < 1) throw DomainError("radii: K must be >= 1");
  std::vector<double> radii;
  for (int k = 1; k <= K + 1; ++k) radii.push_back(1.0 - std::ldexp(1.0, -k - 1));
  return radii;
}

std::vector<double> radii_log2_tail(int K, int d) {
  if (K < 1) throw DomainError("radii: K must be >= 1");
  int k0 = 2;
  while (!check_one_bubble_start(k0, d).ok) ++k0;
  std::vector<double> radii;
  double tail = log2_tail(k0);
  for (int k = k0; k <= k0 + K; ++k) {
    radii.push_back(1.0 - tail);
    tail -= log2_term(static_cast<double>(k));
  }
  return radii;
}

ChampagneConfig build_unit_ball(const GaugeSet& gauges, double delta, std::span<const double> radii,
                                std::uint64_t seed, const BuildOptions& opt) {
  check_radii(radii);
  if (!(delta > 0.0)) throw DomainError("build_unit_ball: delta must be positive");
  const int d = gauges.d();
  ChampagneConfig cfg;
  cfg.d = d;
  cfg.domain = Domain::ball(Vec{}, 1.0, d);
  cfg.gauge = gauges.h();
  cfg.delta = delta;
  cfg.clearance_factor = 6.0;
  cfg.builder = "unit-ball";
  cfg.seed = seed;

  LayerStack stack;
  const int K = static_cast<int>(radii.size()) - 1;
  for (int k = 1; k <= K; ++k) {
    const double R = radii[static_cast<std::size_t>(k - 1)];
    const double prev = k == 1 ? 0.5 : radii[static_cast<std::size_t>(k - 2)];
    const double rho = (radii[static_cast<std::size_t>(k)] - R) / 2.0;
    const double cap = std::min(rho0_threshold(rho, d), (R - prev) / 2.0);
    stack.layers.push_back(budgeted_layer(k, R, rho, cap, 1.0, std::ldexp(delta, -k), gauges,
                                          mix64(seed + static_cast<std::uint64_t>(k)), opt));
  }
  cfg.stacks.push_back(std::move(stack));
  cfg.placements.push_back(Placement{0, Vec{}, 1.0, 0, delta, 0.0});
  cfg.params["layers"] = std::to_string(K);
  cfg.seal();
  return cfg;
}

int annulus_layer_count(double gamma, double kappa_hat) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("annulus: gamma must lie in (0,1)");
  if (!(kappa_hat > 0.0 && kappa_hat < 1.0)) throw DomainError("annulus: kappa_hat must lie in (0,1)");
  const double m = std::ceil(std::log1p(-gamma) / std::log1p(-kappa_hat));
  if (!(m < 1e9)) throw BuildError("annulus: layer count overflows");
  return std::max(1, static_cast<int>(m));
}

LayerStack make_annulus_stack_layers(int m, double a, double a_prime, double delta_y,
                                     const GaugeSet& gauges, std::uint64_t seed,
                                     const BuildOptions& opt) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("annulus: a must lie in (0,1]");
  if (!(a_prime > 0.0 && a_prime < a)) throw DomainError("annulus: need 0 < a' < a");
  if (!(delta_y > 0.0)) throw DomainError("annulus: delta_y must be positive");
  if (m < 1) throw DomainError("annulus: need at least one layer");
  const int d = gauges.d();
  const double tau = a_prime / a;
  const double rho = (1.0 - tau) / (2.0 * (m + 2));
  LayerStack stack;
  for (int j = 1; j <= m; ++j) {
    const double R = tau + (1.0 - tau) * j / (m + 2);
    stack.layers.push_back(budgeted_layer(j, R, rho, rho0_threshold(rho, d), a,
                                          std::ldexp(delta_y, -j), gauges,
                                          mix64(seed + static_cast<std::uint64_t>(j)), opt));
  }
  return stack;
}

LayerStack make_annulus_stack(double a, double a_prime, double gamma, double delta_y,
                              double kappa_hat, const GaugeSet& gauges, std::uint64_t seed,
                              const BuildOptions& opt) {
  const int m = annulus_layer_count(gamma, kappa_hat);
  if (m > opt.max_layers) {
    throw BuildError("annulus: kappa_hat requires " + std::to_string(m) +
                     " layers, above the cap of " + std::to_string(opt.max_layers));
  }
  return make_annulus_stack_layers(m, a, a_prime, delta_y, gauges, seed, opt);
}

AnnulusGroup fill_annulus(const Vec& y, double a, double a_prime, double gamma, double delta_y,
                          double kappa_hat, const GaugeSet& gauges, std::uint64_t seed,
                          const BuildOptions& opt) {
  AnnulusGroup g;
  g.stack = make_annulus_stack(a, a_prime, gamma, delta_y, kappa_hat, gauges, seed, opt);
  g.placement = Placement{0, y, a, 0, delta_y, placement_weight(g.stack, a, gauges.h(), gauges.d())};
  return g;
}

std::vector<Vec> choose_annulus_centers(const Domain& level, double gap, std::uint64_t seed) {
  if (!(gap > 0.0)) throw DomainError("annulus centers: gap must be positive");
  const int d = level.d();
  const double h = gap / 12.0;
  const double count = std::ceil(level.piece_boundary_measure() / std::pow(h, d - 1));
  if (count > 2.0e7) throw BuildError("annulus centers: boundary sample too large");
  const auto samples = sample_boundary(level, static_cast<std::size_t>(count), seed);
  if (samples.empty()) throw BuildError("annulus centers: empty boundary sample");
  const double sep = gap / 3.0;
  PointGrid chosen(d, sep);
  for (const auto& p : samples) {
    if (!chosen.any_within(p, sep)) chosen.insert(p);
  }
  for (const auto& p : samples) {
    if (chosen.nearest(p).distance > gap / 2.0) {
      throw InvariantViolation("annulus centers: B(y, d_n/2) fail to cover the boundary");
    }
  }
  return chosen.points();
}

ChampagneConfig build_general(const Domain& domain, const Exhaustion& exhaustion,
                              const GaugeSet& gauges, double delta, double kappa_hat,
                              std::uint64_t seed, const BuildOptions& opt) {
  if (domain.d() != gauges.d()) throw DomainError("build_general: dimension mismatch");
  if (!(delta > 0.0)) throw DomainError("build_general: delta must be positive");
  ChampagneConfig cfg;
  cfg.d = domain.d();
  cfg.domain = domain;
  cfg.gauge = gauges.h();
  cfg.delta = delta;
  cfg.clearance_factor = 18.0;
  cfg.builder = "general";
  cfg.seed = seed;
  cfg.exhaustion = exhaustion;

  for (std::size_t i = 0; i < exhaustion.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const double dn = exhaustion.gaps[i];
    if (!(dn > 0.0)) {
      throw BuildError("build_general: exhaustion level " + std::to_string(n) +
                       " is not strictly nested (d_n = 0)");
    }
    const auto Y = choose_annulus_centers(exhaustion.levels[i], dn,
                                          mix64(seed ^ static_cast<std::uint64_t>(n)));
    const double delta_y = delta / (static_cast<double>(Y.size()) * std::ldexp(1.0, n));
    const double a = dn / 6.0;
    cfg.stacks.push_back(make_annulus_stack(a, dn / 7.0, 0.5, delta_y, kappa_hat, gauges,
                                            mix64(seed + static_cast<std::uint64_t>(n)), opt));
    const int s = static_cast<int>(cfg.stacks.size()) - 1;
    for (const auto& y : Y) cfg.placements.push_back(Placement{s, y, a, n, delta_y, 0.0});
  }
  cfg.params["kappa_hat"] = shortest(kappa_hat);
  cfg.params["gamma"] = "0.5";
  cfg.params["levels"] = std::to_string(exhaustion.size());
  cfg.seal();
  return cfg;
}

double ladder_bound(std::span<const double> kappas) {
  double log_miss = 0.0;
  for (double k : kappas) {
    if (!(k >= 0.0 && k <= 1.0)) throw DomainError("ladder_bound: kappa outside [0,1]");
    if (k == 1.0) return 1.0;
    log_miss += std::log1p(-k);
  }
  return -std::expm1(log_miss);
}

}  // namespace champagne
