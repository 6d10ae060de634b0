#pragma once

// Domain descriptors with signed-distance queries, boundary sampling and
// exhaustions by inward offsets.

#include <cstdint>
#include <utility>
#include <vector>

#include "champagne/vec.hpp"

namespace champagne {

/// Ball, box, or a union/intersection tree of them. Signed distance is
/// negative inside; min/max composition is exact outside unions and a
/// lower bound on |distance| inside, which is all walk-on-spheres needs.
class Domain {
 public:
  enum class Kind { Ball, Box, Union, Intersection };

  static Domain ball(const Vec& center, double radius, int d);
  static Domain box(const Vec& lo, const Vec& hi, int d);
  static Domain unite(std::vector<Domain> parts);
  static Domain intersect(std::vector<Domain> parts);
  /// [0,2w]x[0,w] union [0,w]x[0,2w]: overlapping arms, reentrant corner at (w,w).
  static Domain lshape(double w = 1.0);

  Kind kind() const { return kind_; }
  int d() const { return d_; }
  const Vec& center() const { return a_; }
  double radius() const { return radius_; }
  const Vec& lo() const { return a_; }
  const Vec& hi() const { return b_; }
  const std::vector<Domain>& children() const { return children_; }

  double signed_distance(const Vec& p) const;
  bool contains(const Vec& p) const { return signed_distance(p) < 0.0; }

  /// {x : sd(x) < -eps}, represented as a domain of the same shape.
  Domain shrunk(double eps) const;
  std::pair<Vec, Vec> bounding_box() const;
  /// Boundary measure ((d-1)-dimensional) of the primitive pieces, summed.
  double piece_boundary_measure() const;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  Kind kind_ = Kind::Ball;
  int d_ = 2;
  Vec a_{}, b_{};
  double radius_ = 1.0;
  std::vector<Domain> children_;
};

/// Points on the boundary with |signed distance| < 1e-9. Primitive boundaries
/// are gridded (spacing from `count`) and filtered by the composite distance.
std::vector<Vec> sample_boundary(const Domain& domain, std::size_t count, std::uint64_t seed);

/// Flood fill over a grid of the bounding box; true when the interior cells
/// form a single component.
bool is_connected(const Domain& domain, int resolution = 0);

struct Exhaustion {
  /// V_1 .. V_{N+1}; the last level only supplies the outer gap of V_N.
  std::vector<Domain> levels;
  std::vector<double> offsets;
  /// d_n = min{dist(dV_n, dV_{n-1} u dV_{n+1}), 1/n} for n = 1..N (V_0 empty).
  std::vector<double> gaps;
  std::size_t size() const { return gaps.size(); }
};

/// V_n = inward offset of `domain` by first_offset * ratio^{n-1}.
Exhaustion make_exhaustion(const Domain& domain, int levels, double first_offset = 0.25,
                           double ratio = 0.5, std::size_t boundary_samples = 20000);

}  // namespace champagne
