#pragma once

// Per-layer hitting estimates (kappa), the ladder bound, and the direct
// full-configuration check of the product criterion.

#include <cstdint>
#include <vector>

#include "champagne/builder.hpp"
#include "champagne/wos.hpp"

namespace champagne {

struct KappaEstimate {
  double kappa_low = 0.0;   // min over probes of the lower CI bound
  double kappa = 0.0;       // min over probes of p_hat
  double kappa_high = 0.0;  // min over probes of the upper CI bound
  int argmin = -1;          // probe realizing kappa
  std::vector<Vec> probes;
  std::vector<WosEstimate> per_probe;

  double sigma() const { return argmin < 0 ? 0.0 : per_probe[static_cast<std::size_t>(argmin)].sigma(); }
  std::uint64_t samples() const;
};

/// n probe points on the sphere |z - center| = radius (equal angles for d = 2).
std::vector<Vec> sphere_probes(int d, int n, double radius, const Vec& center, std::uint64_t seed);

/// kappa from explicit probes; probe i uses seed mix64(opt.seed + i).
KappaEstimate kappa_from_probes(const Domain& V, const BubbleSet& A, const std::vector<Vec>& probes,
                                const WosOptions& opt);

/// H_{V \ E} 1_E on |z| = R + rho with V = B(0, R + 2 rho) and E the layer's
/// bubbles, all scaled by `scale` about `center`. Probes that fall inside a
/// bubble are redrawn.
KappaEstimate layer_kappa_estimate(const SphereLayer& layer, int d, int probes,
                                   const WosOptions& opt, double scale = 1.0,
                                   const Vec& center = Vec{});
/// Layer with the given index in the stack of placement 0.
KappaEstimate layer_kappa_estimate(const ChampagneConfig& cfg, int layer_index, int probes,
                                   const WosOptions& opt);

/// kappa of a reference annulus stack (radii in (6/7, 1), scale a): the
/// minimum lower CI bound over its layers, for sizing annulus fillers.
/// A nonpositive opt.epsilon means 1e-3 times each layer's bubble radius.
struct ReferenceKappa {
  double kappa_low = 0.0;
  LayerStack stack;
  std::vector<KappaEstimate> layers;
};
ReferenceKappa reference_annulus_kappa(const GaugeSet& gauges, double a, double delta_y, int layers,
                                       int probes, const WosOptions& opt,
                                       const BuildOptions& build = {});

/// Reference kappa for a general build: the stack is sized for the deepest
/// exhaustion level (smallest d_n and smallest share delta/(#Y_N 2^N)).
ReferenceKappa general_reference_kappa(const Exhaustion& exhaustion, const GaugeSet& gauges,
                                       double delta, int layers, int probes, const WosOptions& opt,
                                       std::uint64_t build_seed, const BuildOptions& build = {});

/// g(z) = phi(r) (N(|z-x|) - N(3 beta)), the single-bubble minorant.
double one_bubble_minorant(double depth, double dist, double beta, int d);

struct LayerReportRow {
  int layer = 0;
  double R = 0.0, rho = 0.0, r = 0.0, count = 0.0;
  double capacity_sum = 0.0, weighted_sum = 0.0;
  KappaEstimate kappa;
};

struct UnavoidabilityReport {
  std::vector<LayerReportRow> rows;
  double ladder = 0.0;
  double ladder_sigma = 0.0;  // delta method over the per-layer sigmas
  Vec start;
  WosEstimate direct;
  double margin = 0.0;  // 3 sqrt(sigma_direct^2 + ladder_sigma^2)
  bool consistent = false;
};

/// Layers 1..K of placement 0: kappa per layer, ladder bound, and a direct
/// walk over the whole truncated configuration from `start`.
UnavoidabilityReport unavoidability_report(const ChampagneConfig& cfg, int K, int probes,
                                           const WosOptions& kappa_opt,
                                           const WosOptions& direct_opt, const Vec& start);

}  // namespace champagne
