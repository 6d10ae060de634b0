#include "champagne/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>

#include "champagne/error.hpp"
#include "champagne/rng.hpp"
#include "champagne/sphere_design.hpp"

namespace champagne {

namespace {

constexpr double kBoundaryTol = 1e-9;

void require_dim(int d) {
  if (d < 2 || d > kMaxDim) throw DomainError("domain: unsupported dimension");
}

int common_dim(const std::vector<Domain>& parts) {
  if (parts.empty()) throw DomainError("domain: empty composite");
  const int d = parts.front().d();
  for (const auto& p : parts) {
    if (p.d() != d) throw DomainError("domain: mixed dimensions in composite");
  }
  return d;
}

// Cell-centred grid on the faces of a box.
void sample_box_faces(const Vec& lo, const Vec& hi, int d, double h, std::vector<Vec>& out) {
  for (int axis = 0; axis < d; ++axis) {
    std::array<long, kMaxDim> n{};
    long total = 1;
    for (int j = 0; j < d; ++j) {
      if (j == axis) continue;
      n[j] = std::max(1L, static_cast<long>(std::ceil((hi[j] - lo[j]) / h)));
      total *= n[j];
    }
    for (int side = 0; side < 2; ++side) {
      for (long idx = 0; idx < total; ++idx) {
        Vec p;
        long rest = idx;
        for (int j = 0; j < d; ++j) {
          if (j == axis) {
            p[j] = side == 0 ? lo[j] : hi[j];
            continue;
          }
          const long k = rest % n[j];
          rest /= n[j];
          p[j] = lo[j] + (hi[j] - lo[j]) * (static_cast<double>(k) + 0.5) / static_cast<double>(n[j]);
        }
        out.push_back(p);
      }
    }
  }
}

void sample_pieces(const Domain& dom, double h, std::uint64_t seed, std::vector<Vec>& out) {
  switch (dom.kind()) {
    case Domain::Kind::Ball: {
      const int d = dom.d();
      const double area = 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0) *
                          std::pow(dom.radius(), d - 1);
      const auto n = static_cast<std::size_t>(std::max(8.0, std::ceil(area / std::pow(h, d - 1))));
      auto pts = quasi_uniform_sphere(d, n, dom.radius(), seed);
      for (auto& p : pts) out.push_back(p + dom.center());
      break;
    }
    case Domain::Kind::Box:
      sample_box_faces(dom.lo(), dom.hi(), dom.d(), h, out);
      break;
    default:
      for (std::size_t i = 0; i < dom.children().size(); ++i) {
        sample_pieces(dom.children()[i], h, seed + i + 1, out);
      }
  }
}

}  // namespace

Domain Domain::ball(const Vec& center, double radius, int d) {
  require_dim(d);
  if (!(radius > 0.0)) throw DomainError("ball: radius must be positive");
  Domain dom;
  dom.kind_ = Kind::Ball;
  dom.d_ = d;
  dom.a_ = center;
  dom.radius_ = radius;
  return dom;
}

Domain Domain::box(const Vec& lo, const Vec& hi, int d) {
  require_dim(d);
  for (int i = 0; i < d; ++i) {
    if (!(hi[i] > lo[i])) throw DomainError("box: max corner must exceed min corner");
  }
  Domain dom;
  dom.kind_ = Kind::Box;
  dom.d_ = d;
  dom.a_ = lo;
  dom.b_ = hi;
  return dom;
}

Domain Domain::unite(std::vector<Domain> parts) {
  Domain dom;
  dom.kind_ = Kind::Union;
  dom.d_ = common_dim(parts);
  dom.children_ = std::move(parts);
  return dom;
}

Domain Domain::intersect(std::vector<Domain> parts) {
  Domain dom;
  dom.kind_ = Kind::Intersection;
  dom.d_ = common_dim(parts);
  dom.children_ = std::move(parts);
  return dom;
}

Domain Domain::lshape(double w) {
  return unite({box(make_vec({0, 0}), make_vec({2 * w, w}), 2),
                box(make_vec({0, 0}), make_vec({w, 2 * w}), 2)});
}

double Domain::signed_distance(const Vec& p) const {
  switch (kind_) {
    case Kind::Ball:
      return distance(p, a_) - radius_;
    case Kind::Box: {
      double outside = 0.0, inside = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < d_; ++i) {
        const double half = 0.5 * (b_[i] - a_[i]);
        const double q = std::abs(p[i] - 0.5 * (a_[i] + b_[i])) - half;
        outside += q > 0.0 ? q * q : 0.0;
        inside = std::max(inside, q);
      }
      return outside > 0.0 ? std::sqrt(outside) : std::min(inside, 0.0);
    }
    case Kind::Union: {
      double s = std::numeric_limits<double>::infinity();
      for (const auto& c : children_) s = std::min(s, c.signed_distance(p));
      return s;
    }
    case Kind::Intersection: {
      double s = -std::numeric_limits<double>::infinity();
      for (const auto& c : children_) s = std::max(s, c.signed_distance(p));
      return s;
    }
  }
  return 0.0;
}

Domain Domain::shrunk(double eps) const {
  if (!(eps >= 0.0)) throw DomainError("shrunk: negative offset");
  switch (kind_) {
    case Kind::Ball:
      if (radius_ <= eps) throw DomainError("shrunk: offset empties a ball");
      return ball(a_, radius_ - eps, d_);
    case Kind::Box: {
      Vec lo = a_, hi = b_;
      for (int i = 0; i < d_; ++i) {
        lo[i] += eps;
        hi[i] -= eps;
        if (!(hi[i] > lo[i])) throw DomainError("shrunk: offset empties a box");
      }
      return box(lo, hi, d_);
    }
    default: {
      std::vector<Domain> parts;
      for (const auto& c : children_) parts.push_back(c.shrunk(eps));
      return kind_ == Kind::Union ? unite(std::move(parts)) : intersect(std::move(parts));
    }
  }
}

std::pair<Vec, Vec> Domain::bounding_box() const {
  switch (kind_) {
    case Kind::Ball: {
      Vec lo = a_, hi = a_;
      for (int i = 0; i < d_; ++i) {
        lo[i] -= radius_;
        hi[i] += radius_;
      }
      return {lo, hi};
    }
    case Kind::Box:
      return {a_, b_};
    default: {
      auto [lo, hi] = children_.front().bounding_box();
      for (const auto& c : children_) {
        auto [l, h] = c.bounding_box();
        for (int i = 0; i < d_; ++i) {
          lo[i] = kind_ == Kind::Union ? std::min(lo[i], l[i]) : std::max(lo[i], l[i]);
          hi[i] = kind_ == Kind::Union ? std::max(hi[i], h[i]) : std::min(hi[i], h[i]);
        }
      }
      return {lo, hi};
    }
  }
}

double Domain::piece_boundary_measure() const {
  switch (kind_) {
    case Kind::Ball:
      return 2.0 * std::pow(std::numbers::pi, d_ / 2.0) / std::tgamma(d_ / 2.0) *
             std::pow(radius_, d_ - 1);
    case Kind::Box: {
      double total = 0.0;
      for (int axis = 0; axis < d_; ++axis) {
        double face = 1.0;
        for (int j = 0; j < d_; ++j) {
          if (j != axis) face *= b_[j] - a_[j];
        }
        total += 2.0 * face;
      }
      return total;
    }
    default: {
      double total = 0.0;
      for (const auto& c : children_) total += c.piece_boundary_measure();
      return total;
    }
  }
}

std::vector<Vec> sample_boundary(const Domain& domain, std::size_t count, std::uint64_t seed) {
  const int d = domain.d();
  const double h = std::pow(domain.piece_boundary_measure() / static_cast<double>(std::max<std::size_t>(count, 1)),
                            1.0 / (d - 1));
  std::vector<Vec> raw;
  sample_pieces(domain, h, seed, raw);
  std::vector<Vec> out;
  out.reserve(raw.size());
  for (const auto& p : raw) {
    if (std::abs(domain.signed_distance(p)) < kBoundaryTol) out.push_back(p);
  }
  return out;
}

bool is_connected(const Domain& domain, int resolution) {
  const int d = domain.d();
  if (resolution <= 0) resolution = d == 2 ? 400 : (d == 3 ? 64 : 16);
  auto [lo, hi] = domain.bounding_box();
  std::array<long, kMaxDim> n{};
  std::array<double, kMaxDim> step{};
  long total = 1;
  for (int i = 0; i < d; ++i) {
    n[i] = resolution;
    step[i] = (hi[i] - lo[i]) / resolution;
    total *= n[i];
  }
  std::vector<char> inside(static_cast<std::size_t>(total), 0);
  auto center_of = [&](long idx) {
    Vec p;
    for (int i = 0; i < d; ++i) {
      p[i] = lo[i] + (static_cast<double>(idx % n[i]) + 0.5) * step[i];
      idx /= n[i];
    }
    return p;
  };
  long first = -1, count = 0;
  for (long idx = 0; idx < total; ++idx) {
    if (domain.contains(center_of(idx))) {
      inside[static_cast<std::size_t>(idx)] = 1;
      ++count;
      if (first < 0) first = idx;
    }
  }
  if (count == 0) return false;
  std::vector<char> seen(inside.size(), 0);
  std::deque<long> queue{first};
  seen[static_cast<std::size_t>(first)] = 1;
  long reached = 0;
  while (!queue.empty()) {
    const long idx = queue.front();
    queue.pop_front();
    ++reached;
    long stride = 1;
    for (int i = 0; i < d; ++i) {
      const long coord = (idx / stride) % n[i];
      for (int dir : {-1, 1}) {
        const long c = coord + dir;
        if (c < 0 || c >= n[i]) continue;
        const long nb = idx + dir * stride;
        auto u = static_cast<std::size_t>(nb);
        if (inside[u] && !seen[u]) {
          seen[u] = 1;
          queue.push_back(nb);
        }
      }
      stride *= n[i];
    }
  }
  return reached == count;
}

Exhaustion make_exhaustion(const Domain& domain, int levels, double first_offset, double ratio,
                           std::size_t boundary_samples) {
  if (levels < 1) throw DomainError("make_exhaustion: need at least one level");
  if (!(first_offset > 0.0) || !(ratio > 0.0 && ratio < 1.0)) {
    throw DomainError("make_exhaustion: offsets must be positive and strictly decreasing");
  }
  Exhaustion ex;
  double eps = first_offset;
  for (int n = 1; n <= levels + 1; ++n, eps *= ratio) {
    Domain v = domain.shrunk(eps);
    if (!is_connected(v)) {
      throw DomainError("make_exhaustion: offset level " + std::to_string(n) + " is disconnected");
    }
    ex.levels.push_back(std::move(v));
    ex.offsets.push_back(eps);
  }
  for (int n = 1; n <= levels; ++n) {
    const auto& vn = ex.levels[static_cast<std::size_t>(n - 1)];
    const auto& outer = ex.levels[static_cast<std::size_t>(n)];
    double gap = 1.0 / n;
    for (const auto& y : sample_boundary(vn, boundary_samples, static_cast<std::uint64_t>(n))) {
      gap = std::min(gap, std::abs(outer.signed_distance(y)));
      if (n > 1) gap = std::min(gap, std::abs(ex.levels[static_cast<std::size_t>(n - 2)].signed_distance(y)));
    }
    if (!(gap > 0.0)) {
      throw DomainError("make_exhaustion: level " + std::to_string(n) + " is not strictly nested");
    }
    ex.gaps.push_back(gap);
  }
  return ex;
}

}  // namespace champagne
