#pragma once

// The obstacle set A: groups of equal bubbles on spheres ("shells") plus
// free-standing bubbles, with a two-level uniform-grid index.

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "champagne/point_grid.hpp"
#include "champagne/vec.hpp"

namespace champagne {

struct Bubble {
  Vec center;
  double radius = 0.0;
  int layer_id = -1;
};

/// Bubbles with centers origin + scale * u, u ranging over `local` points
/// (all at distance local_R from 0), radius bubble_radius each.
struct Shell {
  Vec origin;
  double scale = 1.0;
  double local_R = 1.0;
  double bubble_radius = 0.0;
  int layer_id = -1;
  int placement = -1;
  std::shared_ptr<const PointGrid> local;

  double sphere_radius() const { return scale * local_R; }
  std::size_t size() const { return local ? local->size() : 0; }
  Vec center(std::size_t i) const { return origin + scale * local->points()[i]; }
};

struct BubbleId {
  int shell = -1;  // -1: free-standing bubble
  std::uint32_t index = 0;
  friend bool operator==(const BubbleId&, const BubbleId&) = default;
};

class BubbleSet {
 public:
  explicit BubbleSet(int d = 2) : d_(d) {}

  int d() const { return d_; }
  void add_shell(Shell s);
  void add_bubble(const Bubble& b);
  /// Builds the top-level grid; must run before queries.
  void finalize();

  std::size_t bubble_count() const;
  const std::vector<Shell>& shells() const { return shells_; }
  const std::vector<Bubble>& loose() const { return loose_; }
  Bubble bubble(BubbleId id) const;
  std::string describe(BubbleId id) const;
  bool empty() const { return shells_.empty() && loose_.empty(); }

  template <class F>
  void for_each_bubble(F&& f) const {
    for (std::size_t s = 0; s < shells_.size(); ++s) {
      for (std::uint32_t i = 0; i < shells_[s].size(); ++i) f(BubbleId{static_cast<int>(s), i});
    }
    for (std::uint32_t i = 0; i < loose_.size(); ++i) f(BubbleId{-1, i});
  }

  struct Nearest {
    double distance = std::numeric_limits<double>::infinity();
    BubbleId id;
    bool found = false;
  };

  /// Exact distance from p to the nearest bubble surface (<= 0 inside a bubble).
  Nearest nearest(const Vec& p) const;

  /// Walk-on-spheres step query: returns min(cap, distance to A) when A is
  /// closer than the grid resolution, else a value in [min(cap, h), true distance].
  /// `obstacle` is set when A realizes the returned value.
  double step_bound(const Vec& p, double cap, bool& obstacle) const;

  struct Overlap {
    BubbleId a, b;
    double gap = 0.0;  // |c_a - c_b| - r_a - r_b (<= 0 means intersecting)
  };
  /// Pairwise disjointness through the index. Returns at most `limit` violations.
  std::vector<Overlap> overlaps(std::size_t limit = 16) const;
  /// O(n^2) reference check over every pair.
  std::vector<Overlap> overlaps_brute_force(std::size_t limit = 16) const;

 private:
  struct Item {
    Vec center;
    double bound = 0.0;  // bounding-ball radius
    int shell = -1;
    int loose = -1;
  };
  double item_lower_bound(const Item& it, const Vec& p) const;
  Nearest item_exact(const Item& it, const Vec& p) const;
  std::uint64_t cell_key(const Vec& p) const;
  std::vector<std::size_t> candidate_items(const Vec& p) const;

  int d_;
  std::vector<Shell> shells_;
  std::vector<Bubble> loose_;
  std::vector<Item> items_;
  double top_cell_ = 1.0;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> top_;
  bool finalized_ = false;
};

}  // namespace champagne
