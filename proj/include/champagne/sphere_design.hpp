#pragma once

// Finite point sets on spheres whose beta-balls cover the sphere and whose
// (beta/3)-balls are pairwise disjoint.

#include <cstdint>
#include <vector>

#include "champagne/vec.hpp"

namespace champagne {

struct SpherePointSet {
  double R = 1.0;
  int d = 2;
  double beta = 0.0;
  std::uint64_t seed = 0;
  std::vector<Vec> points;  // on the sphere of radius R about the origin
  double covering_radius_measured = 0.0;
  double min_pairwise_distance = 0.0;
};

struct DesignOptions {
  int covering_samples = 100000;
  /// Candidate lattice size is candidate_factor * (R/beta)^{d-1} (d >= 3).
  double candidate_factor = 100.0;
  /// Refuse designs whose packing bound exceeds this many points.
  double max_points = 2.0e6;
};

/// d = 2: equally spaced ring, M adjusted from ceil(pi R / beta) until both
/// invariants hold exactly. d >= 3: greedy maximal (2 beta/3)-separated subset
/// of a dense quasi-uniform candidate set (Fibonacci lattice for d = 3,
/// seeded Gaussian directions otherwise). Requires 0 < beta < 2R.
SpherePointSet design_sphere_points(double R, double beta, int d, std::uint64_t seed,
                                    const DesignOptions& opt = {});

/// Upper bound on the size of any set on the sphere of radius R with
/// pairwise distances >= 2 beta/3. Exact ring count for d = 2.
double design_count_bound(double R, double beta, int d);

/// Quasi-uniform sample of n points on the sphere of radius R.
std::vector<Vec> quasi_uniform_sphere(int d, std::size_t n, double R, std::uint64_t seed);

std::vector<Vec> fibonacci_sphere(std::size_t n, double R);

/// Largest distance from `samples` to their nearest design point.
double measure_covering_radius(const std::vector<Vec>& design, const std::vector<Vec>& samples,
                               int d, double cell);

/// Area-argument band for count * (beta/R)^{d-1}: covering by beta-caps gives
/// the lower end omega_{d-1}/v_{d-1}, disjoint (beta/3)-caps the upper end 3^{d-1} times that.
struct CardinalityBand {
  double lower = 0.0;
  double upper = 0.0;
};
CardinalityBand cardinality_band(int d);

struct CardinalityReport {
  double count = 0.0;
  double ratio = 0.0;             // count * beta^{d-1}
  double normalized_ratio = 0.0;  // count * (beta/R)^{d-1}
  double capacity_product = 0.0;  // count * phi(r) * rho with r solved from beta and rho
  CardinalityBand band;
  bool in_band = false;
};

CardinalityReport cardinality_check(const SpherePointSet& ps, double rho);
CardinalityReport cardinality_check(double count, double R, double beta, int d, double rho);

}  // namespace champagne
