#include "champagne/sphere_design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "champagne/error.hpp"
#include "champagne/gauge.hpp"
#include "champagne/point_grid.hpp"
#include "champagne/rng.hpp"

namespace champagne {

namespace {

using std::numbers::pi;

// Surface area of the unit sphere S^{d-1} and volume of the unit (d-1)-ball.
double unit_sphere_area(int d) { return 2.0 * std::pow(pi, d / 2.0) / std::tgamma(d / 2.0); }
double unit_ball_volume(int k) { return std::pow(pi, k / 2.0) / std::tgamma(k / 2.0 + 1.0); }

std::vector<Vec> ring(int M, double R, double phase) {
  std::vector<Vec> pts(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) {
    const double th = phase + 2.0 * pi * i / M;
    pts[static_cast<std::size_t>(i)] = make_vec({R * std::cos(th), R * std::sin(th)});
  }
  return pts;
}

// Random rotation of R^3 from a uniformly distributed unit quaternion.
std::array<std::array<double, 3>, 3> random_rotation(std::uint64_t seed) {
  auto eng = substream(seed, 0x5eed);
  Vec q = random_direction(4, eng);
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
           {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
           {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}}};
}

std::vector<Vec> candidates(int d, std::size_t n, double R, std::uint64_t seed) {
  if (d == 3) {
    auto pts = fibonacci_sphere(n, R);
    const auto rot = random_rotation(seed);
    for (auto& p : pts) {
      Vec r;
      for (int i = 0; i < 3; ++i) r[i] = rot[i][0] * p[0] + rot[i][1] * p[1] + rot[i][2] * p[2];
      // Re-project so rounding in the rotation does not move points off the sphere.
      p = r * (R / norm(r));
    }
    return pts;
  }
  return quasi_uniform_sphere(d, n, R, seed);
}

}  // namespace

std::vector<Vec> fibonacci_sphere(std::size_t n, double R) {
  std::vector<Vec> pts(n);
  const double golden = pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(n);
    const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double th = golden * static_cast<double>(i);
    pts[i] = make_vec({R * rr * std::cos(th), R * rr * std::sin(th), R * z});
  }
  return pts;
}

std::vector<Vec> quasi_uniform_sphere(int d, std::size_t n, double R, std::uint64_t seed) {
  if (d == 2) {
    std::vector<Vec> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double th = 2.0 * pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      pts[i] = make_vec({R * std::cos(th), R * std::sin(th)});
    }
    return pts;
  }
  if (d == 3) return fibonacci_sphere(n, R);
  std::vector<Vec> pts(n);
  auto eng = substream(seed, 0xa11);
  for (auto& p : pts) p = random_direction(d, eng) * R;
  return pts;
}

double measure_covering_radius(const std::vector<Vec>& design, const std::vector<Vec>& samples,
                               int d, double cell) {
  PointGrid grid(d, cell, design);
  double worst = 0.0;
  for (const auto& s : samples) worst = std::max(worst, grid.nearest(s).distance);
  return worst;
}

double design_count_bound(double R, double beta, int d) {
  if (d == 2) {
    // Same adjustment as the ring construction, without materializing points.
    double M = std::ceil(pi * R / beta);
    // Beyond 2^53 the increment is lost; there sin(x) < x already gives covering.
    while (M < 9.0e15 && 2.0 * R * std::sin(pi / (2.0 * M)) > beta) M += 1.0;
    return M;
  }
  if (d == 3) return 36.0 * R * R / (beta * beta);
  // Small-cap estimate; adequate as a size guard in higher dimensions.
  return unit_sphere_area(d) / unit_ball_volume(d - 1) * std::pow(3.0 * R / beta, d - 1);
}

SpherePointSet design_sphere_points(double R, double beta, int d, std::uint64_t seed,
                                    const DesignOptions& opt) {
  if (d < 2 || d > kMaxDim) throw DomainError("design_sphere_points: unsupported dimension");
  if (!(R > 0.0)) throw DomainError("design_sphere_points: R must be positive");
  if (!(beta > 0.0) || beta >= 2.0 * R) {
    throw DomainError("design_sphere_points: need 0 < beta < 2R");
  }
  if (design_count_bound(R, beta, d) > opt.max_points) {
    throw BuildError("design_sphere_points: design exceeds the materialization limit");
  }

  SpherePointSet ps;
  ps.R = R;
  ps.d = d;
  ps.beta = beta;
  ps.seed = seed;
  const double sep = 2.0 * beta / 3.0;

  if (d == 2) {
    int M = static_cast<int>(std::ceil(pi * R / beta));
    // Covering chord 2R sin(pi/2M) <= beta; packing chord 2R sin(pi/M) >= 2 beta/3.
    while (2.0 * R * std::sin(pi / (2.0 * M)) > beta) ++M;
    while (M > 2 && 2.0 * R * std::sin(pi / M) < sep &&
           2.0 * R * std::sin(pi / (2.0 * (M - 1))) <= beta) {
      --M;
    }
    std::mt19937_64 eng = substream(seed, 0x21);
    const double phase = std::uniform_real_distribution<double>(0.0, 2.0 * pi / M)(eng);
    ps.points = ring(M, R, phase);
  } else {
    double factor = opt.candidate_factor;
    for (int attempt = 0; attempt < 4; ++attempt, factor *= 2.0) {
      const auto n = static_cast<std::size_t>(
          std::max(64.0, std::ceil(factor * std::pow(R / beta, d - 1))));
      const auto cand = candidates(d, n, R, seed + static_cast<std::uint64_t>(attempt));
      PointGrid chosen(d, sep);
      for (const auto& c : cand) {
        if (!chosen.any_within(c, sep)) chosen.insert(c);
      }
      ps.points = chosen.points();
      const auto samples = quasi_uniform_sphere(
          d, static_cast<std::size_t>(opt.covering_samples), R, seed ^ 0xc0ffeeULL);
      if (measure_covering_radius(ps.points, samples, d, beta) <= beta) break;
    }
  }

  const auto samples =
      quasi_uniform_sphere(d, static_cast<std::size_t>(opt.covering_samples), R, seed ^ 0xc0ffeeULL);
  ps.covering_radius_measured = measure_covering_radius(ps.points, samples, d, beta);
  ps.min_pairwise_distance = PointGrid(d, sep, ps.points).min_pairwise_distance();
  if (ps.covering_radius_measured > beta || ps.min_pairwise_distance < sep) {
    throw BuildError("design_sphere_points: covering/packing invariants not met");
  }
  return ps;
}

CardinalityBand cardinality_band(int d) {
  const double base = unit_sphere_area(d) / unit_ball_volume(d - 1);
  return {base, std::pow(3.0, d - 1) * base};
}

CardinalityReport cardinality_check(double count, double R, double beta, int d, double rho) {
  CardinalityReport rep;
  rep.count = count;
  rep.ratio = count * std::pow(beta, d - 1);
  rep.normalized_ratio = count * std::pow(beta / R, d - 1);
  // Independent route: solve beta = (phi(r) rho)^{1/(d-1)} for r, then evaluate phi(r).
  double phi = 0.0;
  if (d == 2) {
    phi = capacity_phi_depth(rho / beta, 2);
  } else {
    const double r = std::pow(beta, (d - 1.0) / (d - 2.0)) * std::pow(rho, -1.0 / (d - 2.0));
    phi = capacity_phi(r, d);
  }
  rep.capacity_product = count * phi * rho;
  rep.band = cardinality_band(d);
  rep.in_band = rep.normalized_ratio >= rep.band.lower && rep.normalized_ratio <= rep.band.upper;
  return rep;
}

CardinalityReport cardinality_check(const SpherePointSet& ps, double rho) {
  return cardinality_check(static_cast<double>(ps.points.size()), ps.R, ps.beta, ps.d, rho);
}

}  // namespace champagne
