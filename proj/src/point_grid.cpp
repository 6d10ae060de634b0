#include "champagne/point_grid.hpp"

#include <algorithm>
#include <cmath>

#include "champagne/error.hpp"
#include "champagne/rng.hpp"

namespace champagne {

namespace {
// Shell rings beyond this fall back to a linear scan.
constexpr int kMaxRing = 6;
}  // namespace

PointGrid::PointGrid(int d, double cell) : d_(d), cell_(cell) {
  if (d < 1 || d > kMaxDim) throw DomainError("PointGrid: unsupported dimension");
  if (!(cell > 0.0) || !std::isfinite(cell)) throw DomainError("PointGrid: bad cell size");
}

PointGrid::PointGrid(int d, double cell, std::span<const Vec> points) : PointGrid(d, cell) {
  points_.reserve(points.size());
  cells_.reserve(points.size());
  for (const auto& p : points) insert(p);
}

std::array<std::int64_t, kMaxDim> PointGrid::cell_of(const Vec& p) const {
  std::array<std::int64_t, kMaxDim> c{};
  for (int i = 0; i < d_; ++i) c[i] = static_cast<std::int64_t>(std::floor(p[i] / cell_));
  return c;
}

PointGrid::Key PointGrid::key_of(const std::array<std::int64_t, kMaxDim>& c) const {
  std::uint64_t h = 0x84222325cbf29ce4ULL;
  for (int i = 0; i < d_; ++i) h = mix64(h ^ static_cast<std::uint64_t>(c[i]));
  return h;
}

void PointGrid::insert(const Vec& p) {
  cells_[key_of(cell_of(p))].push_back(static_cast<std::uint32_t>(points_.size()));
  points_.push_back(p);
}

template <class F>
void PointGrid::visit_shell(const std::array<std::int64_t, kMaxDim>& center, int k, F&& f) const {
  // Enumerate offsets in [-k, k]^d with Chebyshev norm exactly k.
  std::array<int, kMaxDim> o{};
  for (int i = 0; i < d_; ++i) o[i] = -k;
  for (;;) {
    int cheb = 0;
    for (int i = 0; i < d_; ++i) cheb = std::max(cheb, std::abs(o[i]));
    if (cheb == k) {
      auto c = center;
      for (int i = 0; i < d_; ++i) c[i] += o[i];
      auto it = cells_.find(key_of(c));
      if (it != cells_.end()) f(it->second);
    }
    int i = 0;
    while (i < d_ && o[i] == k) o[i++] = -k;
    if (i == d_) break;
    ++o[i];
  }
}

PointGrid::Hit PointGrid::nearest(const Vec& q, std::uint32_t skip) const {
  Hit best;
  if (points_.empty()) return best;
  const auto center = cell_of(q);
  for (int k = 0; k <= kMaxRing; ++k) {
    visit_shell(center, k, [&](const std::vector<std::uint32_t>& ids) {
      for (auto id : ids) {
        if (id == skip) continue;
        const double dist = distance(q, points_[id]);
        if (dist < best.distance || (dist == best.distance && id < best.index)) {
          best.distance = dist;
          best.index = id;
        }
      }
    });
    // Every unvisited cell is at least k cells away from q.
    if (best.found() && best.distance <= k * cell_) return best;
  }
  for (std::uint32_t id = 0; id < points_.size(); ++id) {
    if (id == skip) continue;
    const double dist = distance(q, points_[id]);
    if (dist < best.distance || (dist == best.distance && id < best.index)) {
      best.distance = dist;
      best.index = id;
    }
  }
  return best;
}

bool PointGrid::any_within(const Vec& q, double radius) const {
  const auto center = cell_of(q);
  const int rings = static_cast<int>(std::ceil(radius / cell_));
  bool hit = false;
  for (int k = 0; k <= rings && !hit; ++k) {
    visit_shell(center, k, [&](const std::vector<std::uint32_t>& ids) {
      for (auto id : ids) {
        if (distance(q, points_[id]) < radius) {
          hit = true;
          return;
        }
      }
    });
  }
  return hit;
}

double PointGrid::min_pairwise_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t i = 0; i < points_.size(); ++i) {
    best = std::min(best, nearest(points_[i], i).distance);
  }
  return best;
}

}  // namespace champagne
