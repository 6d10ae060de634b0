#include "champagne/audit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "champagne/format.hpp"
#include "champagne/rng.hpp"
#include "champagne/sphere_design.hpp"

namespace champagne {

namespace {

class Recorder {
 public:
  explicit Recorder(AuditReport& rep) : rep_(rep) {}
  void ran(const std::string& check) {
    if (std::find(order_.begin(), order_.end(), check) == order_.end()) order_.push_back(check);
  }
  void fail(const std::string& check, const std::string& detail) {
    ran(check);
    failed_.insert(check);
    if (++per_check_[check] <= 8) rep_.issues.push_back({check, detail});
  }
  void finish() {
    for (const auto& c : order_) {
      if (!failed_.count(c)) rep_.passed.push_back(c);
    }
  }

 private:
  AuditReport& rep_;
  std::vector<std::string> order_;
  std::set<std::string> failed_;
  std::map<std::string, int> per_check_;
};

std::string layer_name(std::size_t s, const SphereLayer& L) {
  return "stack " + std::to_string(s) + " layer " + std::to_string(L.index);
}

double scaled_radius(const SphereLayer& L, double scale) { return std::exp(-(L.depth - std::log(scale))); }

bool rel_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

void audit_layers(const ChampagneConfig& cfg, const AuditOptions& opt, Recorder& rec) {
  const int d = cfg.d;
  const bool one_bubble = cfg.builder == "one-bubble";
  const double local_factor = one_bubble ? 9.0 : 6.0;
  for (std::size_t s = 0; s < cfg.stacks.size(); ++s) {
    const auto& layers = cfg.stacks[s].layers;
    for (std::size_t j = 0; j < layers.size(); ++j) {
      const auto& L = layers[j];
      const auto name = layer_name(s, L);
      rec.ran("layer-parameters");
      if (!(L.rho > 0.0 && L.rho < 1.0 / 3.0 && L.R > 0.0 && L.R < 1.0 && L.depth > 0.0)) {
        rec.fail("layer-parameters", name + ": need 0 < rho < 1/3, 0 < R < 1, r < 1");
        continue;
      }
      rec.ran("beta-definition");
      if (!rel_equal(L.beta, layer_beta(L.depth, L.rho, d), opt.rel_tol)) {
        rec.fail("beta-definition", name + ": beta != (phi(r) rho)^{1/(d-1)}");
      }
      rec.ran("r-below-beta/3");
      if (!(-L.depth < std::log(L.beta / 3.0))) rec.fail("r-below-beta/3", name);
      if (!one_bubble) {
        rec.ran("r-below-rho0");
        if (!(L.depth > std::log(1.0 / rho0_threshold(L.rho, d)))) rec.fail("r-below-rho0", name);
      }
      rec.ran("layer-clearance");
      if (!(local_factor * std::exp(-L.depth) < 1.0 - L.R)) {
        rec.fail("layer-clearance", name + ": " + shortest(local_factor) + " r >= 1 - R");
      }
      if (j + 1 < layers.size()) {
        rec.ran("radial-separation");
        const auto& M = layers[j + 1];
        if (!(M.R - L.R > std::exp(-L.depth) + std::exp(-M.depth))) {
          rec.fail("radial-separation", name + " and layer " + std::to_string(M.index));
        }
      }
      if (L.materialized()) {
        const auto& pts = L.grid->points();
        rec.ran("layer-count");
        if (static_cast<double>(pts.size()) != L.count) rec.fail("layer-count", name);
        rec.ran("points-on-sphere");
        for (std::size_t i = 0; i < pts.size(); ++i) {
          if (!rel_equal(norm(pts[i]), L.R, 1e-12)) {
            rec.fail("points-on-sphere", name + " point " + std::to_string(i));
            break;
          }
        }
        rec.ran("packing");
        const double sep = L.grid->min_pairwise_distance();
        if (sep < 2.0 * L.beta / 3.0) rec.fail("packing", name + ": min distance " + shortest(sep));
        rec.ran("covering");
        const auto samples = quasi_uniform_sphere(d, static_cast<std::size_t>(opt.covering_samples),
                                                  L.R, mix64(L.seed ^ 0xa0d17ULL));
        const double cov = measure_covering_radius(pts, samples, d, L.beta);
        if (cov > L.beta) rec.fail("covering", name + ": covering radius " + shortest(cov));
      } else {
        rec.ran("implicit-count");
        const double bound = design_count_bound(L.R, L.beta, d);
        const bool ok = d == 2 ? L.count == bound : L.count >= bound * (1.0 - 1e-12);
        if (!ok) rec.fail("implicit-count", name + ": count does not match the design bound");
      }
    }
  }
}

void audit_clearance(const ChampagneConfig& cfg, Recorder& rec) {
  const double cf = cfg.clearance_factor;
  rec.ran("clearance");
  for (std::size_t i = 0; i < cfg.placements.size(); ++i) {
    const auto& p = cfg.placements[i];
    for (const auto& L : cfg.stacks[static_cast<std::size_t>(p.stack)].layers) {
      const double s = scaled_radius(L, p.scale);
      if (L.materialized()) {
        const auto& pts = L.grid->points();
        for (std::size_t k = 0; k < pts.size(); ++k) {
          const Vec x = p.center + p.scale * pts[k];
          if (!(cf * s < -cfg.domain.signed_distance(x))) {
            rec.fail("clearance", "placement " + std::to_string(i) + " layer " +
                                      std::to_string(L.index) + " point " + std::to_string(k) +
                                      ": " + shortest(cf) + " r >= dist to boundary");
          }
        }
      } else {
        const double lower = -cfg.domain.signed_distance(p.center) - p.scale * L.R;
        if (!(cf * s < lower)) {
          rec.fail("clearance", "placement " + std::to_string(i) + " layer " + std::to_string(L.index));
        }
      }
    }
  }
  for (std::size_t i = 0; i < cfg.loose.size(); ++i) {
    const auto& b = cfg.loose[i];
    if (!(cf * b.radius < -cfg.domain.signed_distance(b.center))) {
      rec.fail("clearance", "bubble[" + std::to_string(i) + "]");
    }
  }
}

struct Reach {
  Vec center;
  double radius;
  std::size_t placement;
};

void audit_disjointness(const ChampagneConfig& cfg, const AuditOptions& opt, AuditReport& rep,
                        Recorder& rec) {
  const int d = cfg.d;
  // Placements are separated when their bounding balls are disjoint (sweep over x).
  std::vector<Reach> reach;
  for (std::size_t i = 0; i < cfg.placements.size(); ++i) {
    const auto& p = cfg.placements[i];
    double r = 0.0;
    for (const auto& L : cfg.stacks[static_cast<std::size_t>(p.stack)].layers) {
      r = std::max(r, p.scale * L.R + scaled_radius(L, p.scale));
    }
    reach.push_back({p.center, r, i});
  }
  std::sort(reach.begin(), reach.end(), [](const Reach& a, const Reach& b) {
    return a.center[0] - a.radius < b.center[0] - b.radius;
  });
  rec.ran("placement-separation");
  for (std::size_t i = 0; i < reach.size(); ++i) {
    for (std::size_t j = i + 1; j < reach.size(); ++j) {
      if (reach[j].center[0] - reach[j].radius >= reach[i].center[0] + reach[i].radius) break;
      if (distance(reach[i].center, reach[j].center) <= reach[i].radius + reach[j].radius) {
        rec.fail("placement-separation", "placements " + std::to_string(reach[i].placement) +
                                             " and " + std::to_string(reach[j].placement) +
                                             " have overlapping annuli");
      }
    }
  }

  // Materialized bubbles through the index; implicit layers only against loose bubbles.
  BubbleSet bs(d);
  for (std::size_t i = 0; i < cfg.placements.size(); ++i) {
    const auto& p = cfg.placements[i];
    for (const auto& L : cfg.stacks[static_cast<std::size_t>(p.stack)].layers) {
      const double s = scaled_radius(L, p.scale);
      if (L.materialized()) {
        Shell sh;
        sh.origin = p.center;
        sh.scale = p.scale;
        sh.local_R = L.R;
        sh.bubble_radius = s;
        sh.layer_id = L.index;
        sh.placement = static_cast<int>(i);
        sh.local = L.grid;
        bs.add_shell(std::move(sh));
        continue;
      }
      rec.ran("disjointness");
      for (std::size_t k = 0; k < cfg.loose.size(); ++k) {
        const auto& b = cfg.loose[k];
        if (std::abs(distance(b.center, p.center) - p.scale * L.R) <= s + b.radius) {
          rec.fail("disjointness", "bubble[" + std::to_string(k) + "] meets implicit layer " +
                                       std::to_string(L.index) + " of placement " + std::to_string(i));
        }
      }
    }
  }
  for (const auto& b : cfg.loose) bs.add_bubble(b);
  bs.finalize();
  rep.materialized_bubbles = bs.bubble_count();
  rec.ran("disjointness");
  const auto found = bs.overlaps();
  for (const auto& o : found) {
    rec.fail("disjointness", "overlap between " + bs.describe(o.a) + " and " + bs.describe(o.b) +
                                 " (gap " + shortest(o.gap) + ")");
  }
  if (rep.materialized_bubbles > 0 && rep.materialized_bubbles <= opt.brute_force_limit) {
    rec.ran("index-vs-brute-force");
    const auto brute = bs.overlaps_brute_force();
    if (brute.empty() != found.empty()) {
      rec.fail("index-vs-brute-force", "indexed and pairwise disjointness checks disagree");
    }
  }
}

void audit_budgets(const ChampagneConfig& cfg, const GaugeSet& gauges, AuditReport& rep,
                   Recorder& rec) {
  const int d = cfg.d;
  rep.recomputed_total = recompute_weighted_sum(cfg);
  rec.ran("stored-total");
  if (!rel_equal(rep.recomputed_total, cfg.total_weighted_sum, 1e-9)) {
    rec.fail("stored-total", "stored " + shortest(cfg.total_weighted_sum) + " vs recomputed " +
                                 shortest(rep.recomputed_total));
  }
  if (cfg.delta > 0.0) {
    rec.ran("budget");
    if (!(rep.recomputed_total < cfg.delta)) {
      rec.fail("budget", "sum phi(r) h(r) = " + shortest(rep.recomputed_total) +
                             " is not below delta = " + shortest(cfg.delta));
    }
  }
  auto majorant_weight = [&](const SphereLayer& L, double scale) {
    const double ds = L.depth - std::log(scale);
    return L.count * capacity_phi_depth(ds, d) * gauges.majorant_depth(ds);
  };
  if (cfg.builder == "unit-ball" && !cfg.stacks.empty()) {
    rec.ran("layer-budget");
    for (const auto& L : cfg.stacks[0].layers) {
      if (!(majorant_weight(L, 1.0) < std::ldexp(cfg.delta, -L.index))) {
        rec.fail("layer-budget", "layer " + std::to_string(L.index) + " exceeds 2^-k delta");
      }
    }
  }
  if (cfg.builder == "general") {
    std::map<int, std::size_t> per_level;
    for (const auto& p : cfg.placements) ++per_level[p.level];
    rec.ran("annulus-budget");
    for (std::size_t i = 0; i < cfg.placements.size(); ++i) {
      const auto& p = cfg.placements[i];
      const double share = cfg.delta / (static_cast<double>(per_level[p.level]) * std::ldexp(1.0, p.level));
      const auto name = "placement " + std::to_string(i);
      if (!rel_equal(p.budget, share, 1e-12)) {
        rec.fail("annulus-budget", name + ": budget is not delta/(#Y_n 2^n)");
      }
      double w = 0.0;
      for (const auto& L : cfg.stacks[static_cast<std::size_t>(p.stack)].layers) {
        const double ds = L.depth - std::log(p.scale);
        w += L.count * capacity_phi_depth(ds, d) * gauges.h_at_depth(ds);
        if (!(majorant_weight(L, p.scale) < std::ldexp(p.budget, -L.index))) {
          rec.fail("annulus-budget", name + " layer " + std::to_string(L.index) + " exceeds 2^-j delta_y");
        }
      }
      if (!(w < p.budget)) rec.fail("annulus-budget", name + ": weighted sum exceeds delta_y");
    }
    if (cfg.exhaustion) {
      rec.ran("annulus-centers");
      const auto& ex = *cfg.exhaustion;
      for (std::size_t i = 0; i < cfg.placements.size(); ++i) {
        const auto& p = cfg.placements[i];
        const auto n = static_cast<std::size_t>(p.level);
        if (n < 1 || n > ex.size()) {
          rec.fail("annulus-centers", "placement " + std::to_string(i) + ": level out of range");
          continue;
        }
        if (!(std::abs(ex.levels[n - 1].signed_distance(p.center)) < 1e-9)) {
          rec.fail("annulus-centers", "placement " + std::to_string(i) + ": center not on dV_n");
        }
        if (!rel_equal(p.scale, ex.gaps[n - 1] / 6.0, 1e-12)) {
          rec.fail("annulus-centers", "placement " + std::to_string(i) + ": a != d_n/6");
        }
      }
    }
  }
}

}  // namespace

double recompute_weighted_sum(const ChampagneConfig& cfg) {
  const int d = cfg.d;
  double total = 0.0;
  for (const auto& p : cfg.placements) {
    for (const auto& L : cfg.stacks.at(static_cast<std::size_t>(p.stack)).layers) {
      const double ds = L.depth - std::log(p.scale);
      total += L.count * capacity_phi_depth(ds, d) * cfg.gauge.at_depth(ds, d);
    }
  }
  for (const auto& b : cfg.loose) total += capacity_phi(b.radius, d) * cfg.gauge(b.radius, d);
  return total;
}

AuditReport audit_config(const ChampagneConfig& cfg, const AuditOptions& opt) {
  AuditReport rep;
  Recorder rec(rep);
  const GaugeSet gauges(cfg.d, cfg.gauge);
  rep.bubble_count = cfg.bubble_count();
  audit_layers(cfg, opt, rec);
  audit_clearance(cfg, rec);
  audit_disjointness(cfg, opt, rep, rec);
  audit_budgets(cfg, gauges, rep, rec);
  rec.finish();
  return rep;
}

}  // namespace champagne
