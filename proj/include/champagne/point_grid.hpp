#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "champagne/vec.hpp"

namespace champagne {

/// Uniform-grid spatial hash over points in R^d (d <= kMaxDim).
/// Cell keys are hashed; a collision only adds candidates, so queries stay exact.
class PointGrid {
 public:
  PointGrid() = default;
  PointGrid(int d, double cell);
  PointGrid(int d, double cell, std::span<const Vec> points);

  int d() const { return d_; }
  double cell() const { return cell_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Vec>& points() const { return points_; }

  void insert(const Vec& p);

  struct Hit {
    double distance = std::numeric_limits<double>::infinity();
    std::uint32_t index = std::numeric_limits<std::uint32_t>::max();
    bool found() const { return index != std::numeric_limits<std::uint32_t>::max(); }
  };

  /// Exact nearest point; `skip` excludes one index (self queries).
  Hit nearest(const Vec& q, std::uint32_t skip = std::numeric_limits<std::uint32_t>::max()) const;

  /// True when some stored point lies strictly closer than `radius`.
  bool any_within(const Vec& q, double radius) const;

  /// Minimum distance between two distinct stored points (infinity if < 2).
  double min_pairwise_distance() const;

 private:
  using Key = std::uint64_t;
  std::array<std::int64_t, kMaxDim> cell_of(const Vec& p) const;
  Key key_of(const std::array<std::int64_t, kMaxDim>& c) const;
  template <class F>
  void visit_shell(const std::array<std::int64_t, kMaxDim>& center, int k, F&& f) const;

  int d_ = 0;
  double cell_ = 1.0;
  std::vector<Vec> points_;
  std::unordered_map<Key, std::vector<std::uint32_t>> cells_;
};

}  // namespace champagne
