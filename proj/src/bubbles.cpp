#include "champagne/bubbles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "champagne/error.hpp"
#include "champagne/rng.hpp"

namespace champagne {

namespace {
constexpr std::size_t kScanLimit = 32;
}  // namespace

void BubbleSet::add_shell(Shell s) {
  if (!s.local || s.local->size() == 0) throw DomainError("BubbleSet: shell without points");
  shells_.push_back(std::move(s));
  finalized_ = false;
}

void BubbleSet::add_bubble(const Bubble& b) {
  if (!(b.radius > 0.0)) throw DomainError("BubbleSet: bubble radius must be positive");
  loose_.push_back(b);
  finalized_ = false;
}

std::size_t BubbleSet::bubble_count() const {
  std::size_t n = loose_.size();
  for (const auto& s : shells_) n += s.size();
  return n;
}

Bubble BubbleSet::bubble(BubbleId id) const {
  if (id.shell < 0) return loose_.at(id.index);
  const auto& s = shells_.at(static_cast<std::size_t>(id.shell));
  return Bubble{s.center(id.index), s.bubble_radius, s.layer_id};
}

std::string BubbleSet::describe(BubbleId id) const {
  if (id.shell < 0) return "bubble[" + std::to_string(id.index) + "]";
  const auto& s = shells_.at(static_cast<std::size_t>(id.shell));
  return "placement " + std::to_string(s.placement) + " layer " + std::to_string(s.layer_id) +
         " point " + std::to_string(id.index);
}

void BubbleSet::finalize() {
  items_.clear();
  top_.clear();
  double max_bound = 0.0;
  for (std::size_t i = 0; i < shells_.size(); ++i) {
    const auto& s = shells_[i];
    items_.push_back({s.origin, s.sphere_radius() + s.bubble_radius, static_cast<int>(i), -1});
  }
  for (std::size_t i = 0; i < loose_.size(); ++i) {
    items_.push_back({loose_[i].center, loose_[i].radius, -1, static_cast<int>(i)});
  }
  for (const auto& it : items_) max_bound = std::max(max_bound, it.bound);
  top_cell_ = max_bound > 0.0 ? 2.0 * max_bound : 1.0;

  // Each item is listed in every cell within top_cell_ of its bounding ball.
  for (std::uint32_t k = 0; k < items_.size(); ++k) {
    const auto& it = items_[k];
    std::array<long, kMaxDim> lo{}, hi{};
    for (int i = 0; i < d_; ++i) {
      lo[i] = static_cast<long>(std::floor((it.center[i] - it.bound - top_cell_) / top_cell_));
      hi[i] = static_cast<long>(std::floor((it.center[i] + it.bound + top_cell_) / top_cell_));
    }
    std::array<long, kMaxDim> c = lo;
    for (;;) {
      Vec corner;
      for (int i = 0; i < d_; ++i) corner[i] = (static_cast<double>(c[i]) + 0.5) * top_cell_;
      top_[cell_key(corner)].push_back(k);
      int i = 0;
      while (i < d_ && c[i] == hi[i]) {
        c[i] = lo[i];
        ++i;
      }
      if (i == d_) break;
      ++c[i];
    }
  }
  finalized_ = true;
}

std::uint64_t BubbleSet::cell_key(const Vec& p) const {
  std::uint64_t h = 0x9ae16a3b2f90404fULL;
  for (int i = 0; i < d_; ++i) {
    h = mix64(h ^ static_cast<std::uint64_t>(static_cast<long>(std::floor(p[i] / top_cell_))));
  }
  return h;
}

double BubbleSet::item_lower_bound(const Item& it, const Vec& p) const {
  if (it.loose >= 0) return distance(p, it.center) - it.bound;
  const auto& s = shells_[static_cast<std::size_t>(it.shell)];
  return std::abs(distance(p, s.origin) - s.sphere_radius()) - s.bubble_radius;
}

BubbleSet::Nearest BubbleSet::item_exact(const Item& it, const Vec& p) const {
  Nearest out;
  out.found = true;
  if (it.loose >= 0) {
    out.distance = distance(p, it.center) - it.bound;
    out.id = {-1, static_cast<std::uint32_t>(it.loose)};
    return out;
  }
  const auto& s = shells_[static_cast<std::size_t>(it.shell)];
  const Vec rel = p - s.origin;
  const double rn = norm(rel);
  std::uint32_t idx = 0;
  if (rn > 0.0) {
    // On a sphere the nearest center to p is the nearest center to p's radial projection.
    const Vec q = rel * (s.local_R / rn);
    idx = s.local->nearest(q).index;
  }
  out.distance = distance(p, s.center(idx)) - s.bubble_radius;
  out.id = {it.shell, idx};
  return out;
}

std::vector<std::size_t> BubbleSet::candidate_items(const Vec& p) const {
  std::vector<std::size_t> out;
  auto found = top_.find(cell_key(p));
  if (found != top_.end()) out.assign(found->second.begin(), found->second.end());
  return out;
}

BubbleSet::Nearest BubbleSet::nearest(const Vec& p) const {
  Nearest best;
  for (const auto& it : items_) {
    if (best.found && item_lower_bound(it, p) >= best.distance) continue;
    auto n = item_exact(it, p);
    if (!best.found || n.distance < best.distance) best = n;
  }
  return best;
}

double BubbleSet::step_bound(const Vec& p, double cap, bool& obstacle) const {
  obstacle = false;
  if (items_.size() <= kScanLimit) {
    double best = cap;
    for (const auto& it : items_) {
      if (item_lower_bound(it, p) >= best) continue;
      const double dist = item_exact(it, p).distance;
      if (dist < best) {
        best = dist;
        obstacle = true;
      }
    }
    return best;
  }
  double best = std::min(cap, top_cell_);
  auto found = top_.find(cell_key(p));
  if (found == top_.end()) return best;
  for (auto k : found->second) {
    const auto& it = items_[k];
    if (item_lower_bound(it, p) >= best) continue;
    const double dist = item_exact(it, p).distance;
    if (dist < best) {
      best = dist;
      obstacle = true;
    }
  }
  // Ties with the cap count as obstacle hits only when A is strictly nearer.
  return best;
}

std::vector<BubbleSet::Overlap> BubbleSet::overlaps(std::size_t limit) const {
  if (!finalized_) throw InvariantViolation("BubbleSet::overlaps before finalize");
  std::vector<Overlap> out;
  auto push = [&](BubbleId a, BubbleId b) {
    const Bubble ba = bubble(a), bb = bubble(b);
    const double gap = distance(ba.center, bb.center) - ba.radius - bb.radius;
    if (gap <= 0.0 && out.size() < limit) out.push_back({a, b, gap});
  };

  // Within a shell: equal radii, so the minimum center spacing decides.
  for (std::size_t s = 0; s < shells_.size() && out.size() < limit; ++s) {
    const auto& sh = shells_[s];
    const auto& pts = sh.local->points();
    for (std::uint32_t i = 0; i < pts.size() && out.size() < limit; ++i) {
      auto n = sh.local->nearest(pts[i], i);
      if (n.found() && n.distance * sh.scale <= 2.0 * sh.bubble_radius) {
        push({static_cast<int>(s), i}, {static_cast<int>(s), n.index});
      }
    }
  }

  // Between items whose bounding balls meet.
  std::set<std::pair<std::uint32_t, std::uint32_t>> tested;
  for (const auto& [key, ids] : top_) {
    for (std::size_t x = 0; x < ids.size(); ++x) {
      for (std::size_t y = x + 1; y < ids.size(); ++y) {
        auto a = std::min(ids[x], ids[y]), b = std::max(ids[x], ids[y]);
        const auto& ia = items_[a];
        const auto& ib = items_[b];
        if (distance(ia.center, ib.center) > ia.bound + ib.bound) continue;
        if (!tested.insert({a, b}).second) continue;
        if (ia.shell >= 0 && ib.shell >= 0 && ia.center == ib.center) {
          const auto& sa = shells_[static_cast<std::size_t>(ia.shell)];
          const auto& sb = shells_[static_cast<std::size_t>(ib.shell)];
          if (std::abs(sa.sphere_radius() - sb.sphere_radius()) > sa.bubble_radius + sb.bubble_radius) {
            continue;
          }
        }
        // Walk the smaller item's bubbles against the other's exact query.
        const auto& small = (ia.shell >= 0 ? shells_[static_cast<std::size_t>(ia.shell)].size() : 1) <=
                                    (ib.shell >= 0 ? shells_[static_cast<std::size_t>(ib.shell)].size() : 1)
                                ? ia
                                : ib;
        const auto& other = &small == &ia ? ib : ia;
        auto visit = [&](BubbleId id) {
          const Bubble bu = bubble(id);
          if (item_lower_bound(other, bu.center) > bu.radius) return;
          auto n = item_exact(other, bu.center);
          if (n.distance <= bu.radius) push(id, n.id);
        };
        if (small.loose >= 0) {
          visit({-1, static_cast<std::uint32_t>(small.loose)});
        } else {
          const auto& sh = shells_[static_cast<std::size_t>(small.shell)];
          for (std::uint32_t i = 0; i < sh.size() && out.size() < limit; ++i) visit({small.shell, i});
        }
        if (out.size() >= limit) return out;
      }
    }
  }
  return out;
}

std::vector<BubbleSet::Overlap> BubbleSet::overlaps_brute_force(std::size_t limit) const {
  std::vector<BubbleId> ids;
  for_each_bubble([&](BubbleId id) { ids.push_back(id); });
  std::vector<Bubble> all;
  all.reserve(ids.size());
  for (auto id : ids) all.push_back(bubble(id));
  std::vector<Overlap> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const double gap = distance(all[i].center, all[j].center) - all[i].radius - all[j].radius;
      if (gap <= 0.0) {
        out.push_back({ids[i], ids[j], gap});
        if (out.size() >= limit) return out;
      }
    }
  }
  return out;
}

}  // namespace champagne
