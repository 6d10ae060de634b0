#pragma once

// Champagne constructions: single sphere layers, the one-bubble sequence,
// the unit-ball build with per-layer budgets, annulus fillers, and the
// general-domain build over an exhaustion.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "champagne/bubbles.hpp"
#include "champagne/gauge.hpp"
#include "champagne/geometry.hpp"
#include "champagne/point_grid.hpp"
#include "champagne/vec.hpp"

namespace champagne {

/// Bubbles of radius r centered on the sphere |x| = R (local coordinates).
/// Radii are carried as depth = log(1/r) so that d = 2 layers with
/// r = exp(-1e18) remain representable. Layers above the materialization
/// limit keep no points (implicit); their count is then the exact ring
/// size (d = 2) or the packing bound 36 R^2 / beta^2 (d = 3).
struct SphereLayer {
  int index = 0;
  double R = 0.0;
  double rho = 0.0;
  double depth = 0.0;  // log(1/r)
  double beta = 0.0;
  double count = 0.0;
  bool count_exact = true;
  std::uint64_t seed = 0;
  std::shared_ptr<const PointGrid> grid;  // null for implicit layers
  double covering_radius = 0.0;
  double min_separation = 0.0;
  double capacity_sum = 0.0;  // count * phi(r)
  double weighted_sum = 0.0;  // count * phi(r) * h^(r)

  double r() const;
  bool materialized() const { return grid != nullptr; }
};

struct LayerStack {
  std::vector<SphereLayer> layers;
};

/// One instance of a stack: bubble centers y + scale * x, radii scale * r.
struct Placement {
  int stack = 0;
  Vec center;
  double scale = 1.0;
  int level = 0;          // exhaustion level (0 for unit-ball builds)
  double budget = 0.0;    // allotted share of delta
  double weighted_sum = 0.0;  // sum of phi(s_x) h(s_x) over this placement
};

struct ChampagneConfig {
  int d = 2;
  Domain domain = Domain::ball(Vec{}, 1.0, 2);
  Gauge gauge = Gauge::phi_power(0.5);
  double delta = 0.0;
  double clearance_factor = 6.0;
  std::vector<LayerStack> stacks;
  std::vector<Placement> placements;
  std::vector<Bubble> loose;
  std::optional<Exhaustion> exhaustion;
  double total_weighted_sum = 0.0;  // sum of phi(r_x) h(r_x)
  std::string builder;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> params;

  /// Recomputes per-placement and total weighted sums from the layers.
  void seal();
  /// Obstacle index over every materialized layer; throws if any is implicit.
  BubbleSet bubble_set(std::optional<int> max_layer = std::nullopt) const;
  double bubble_count() const;
};

struct BuildOptions {
  double max_points = 2.0e6;  // per layer
  int covering_samples = 100000;
  int halving_steps = 200;    // before switching to squaring r
  int max_layers = 64;        // annulus filler cap
};

/// min{rho/3, 3^{1-d} rho} for d >= 3 and min{rho/3, rho^2/18} for d = 2;
/// every r below it satisfies r < beta/3.
double rho0_threshold(double rho, int d);

/// beta = (phi(r) rho)^{1/(d-1)} from depth = log(1/r).
double layer_beta(double depth, double rho, int d);

/// Single layer on |x| = R. Throws BuildError naming the violated bound when
/// r is not below rho0_threshold.
SphereLayer build_layer(double R, double rho, double r, const GaugeSet& gauges, std::uint64_t seed,
                        const BuildOptions& opt = {});
SphereLayer build_layer_depth(double R, double rho, double depth, const GaugeSet& gauges,
                              std::uint64_t seed, const BuildOptions& opt = {},
                              double scale = 1.0);

/// sum_{j >= k} (j log^2 j)^{-1}, to 1e-12.
double log2_tail(int k);

/// Outcome of the admissibility test for the one-bubble sequence start.
struct OneBubbleCheck {
  bool ok = true;
  std::string failure;
};
OneBubbleCheck check_one_bubble_start(int K, int d);

/// Layers k = K..K_max with R_k = 1 - tail(k), rho = (3 log^2 k)^{-1},
/// beta = rho/k, r = e^{-k} (d = 2) or k^{-(d-1)/(d-2)} rho (d >= 3).
/// params["power_sum"] reports sum #X_k phi(r_k)^{1+eps}.
ChampagneConfig build_one_bubble_sequence(int K, int K_max, int d, double eps, std::uint64_t seed,
                                          const BuildOptions& opt = {});

/// R_k = 1 - 2^{-k-1}, k = 1..K+1.
std::vector<double> radii_geometric(int K);
/// R_k = 1 - tail(k) for k = k0..k0+K with the smallest admissible k0.
std::vector<double> radii_log2_tail(int K, int d);

/// Unit-ball build over radii R_1 < ... < R_{K+1} (R_0 = 1/2): K layers,
/// rho_k = (R_{k+1}-R_k)/2, r_k searched down from min{rho0, (R_k-R_{k-1})/2}
/// until #X_k phi(r_k) h^(r_k) < 2^{-k} delta.
ChampagneConfig build_unit_ball(const GaugeSet& gauges, double delta, std::span<const double> radii,
                                std::uint64_t seed, const BuildOptions& opt = {});

/// Number of layers m - n with (1 - kappa)^{m-n} <= 1 - gamma.
int annulus_layer_count(double gamma, double kappa_hat);

/// Layer stack in unit coordinates for an annulus of radii (a', a):
/// equally spaced spheres in (a'/a, 1), budgets 2^{-j} delta_y at scale a.
LayerStack make_annulus_stack(double a, double a_prime, double gamma, double delta_y,
                              double kappa_hat, const GaugeSet& gauges, std::uint64_t seed,
                              const BuildOptions& opt = {});

/// Same stack with the layer count m given directly.
LayerStack make_annulus_stack_layers(int m, double a, double a_prime, double delta_y,
                                     const GaugeSet& gauges, std::uint64_t seed,
                                     const BuildOptions& opt = {});

struct AnnulusGroup {
  LayerStack stack;
  Placement placement;
};
AnnulusGroup fill_annulus(const Vec& y, double a, double a_prime, double gamma, double delta_y,
                          double kappa_hat, const GaugeSet& gauges, std::uint64_t seed,
                          const BuildOptions& opt = {});

/// Greedy maximal (d_n/3)-separated subset of a dense sample of dV_n.
std::vector<Vec> choose_annulus_centers(const Domain& level, double gap, std::uint64_t seed);

ChampagneConfig build_general(const Domain& domain, const Exhaustion& exhaustion,
                              const GaugeSet& gauges, double delta, double kappa_hat,
                              std::uint64_t seed, const BuildOptions& opt = {});

/// 1 - prod (1 - kappa_j), accumulated in log space.
double ladder_bound(std::span<const double> kappas);

}  // namespace champagne
