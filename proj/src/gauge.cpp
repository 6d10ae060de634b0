#include "champagne/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "champagne/error.hpp"
#include "champagne/format.hpp"

namespace champagne {

namespace {

void require_dim(int d) {
  if (d < 2) throw DomainError("dimension must be >= 2");
}

}  // namespace

double kernel_N(double t, int d) {
  require_dim(d);
  if (!(t > 0.0)) throw DomainError("kernel_N: t must be positive");
  if (d == 2) return std::log(1.0 / t);
  return std::pow(t, 2.0 - d);
}

double capacity_phi(double t, int d) {
  require_dim(d);
  if (!(t > 0.0)) throw DomainError("capacity_phi: t must be positive");
  if (d == 2) {
    if (t >= 1.0) throw DomainError("capacity_phi: d = 2 requires t < 1");
    return 1.0 / std::log(1.0 / t);
  }
  return std::pow(t, d - 2.0);
}

double capacity_phi_depth(double depth, int d) {
  require_dim(d);
  if (d == 2) {
    if (!(depth > 0.0)) throw DomainError("capacity_phi: d = 2 requires t < 1");
    return 1.0 / depth;
  }
  return std::exp(-(d - 2.0) * depth);
}

double annulus_hit_exact(double s, double z_norm, int d) {
  require_dim(d);
  if (!(s > 0.0) || s >= 1.0) throw DomainError("annulus_hit_exact: need 0 < s < 1");
  if (z_norm < s || z_norm > 1.0) {
    throw DomainError("annulus_hit_exact: start radius must lie in [s, 1]");
  }
  const double n1 = kernel_N(1.0, d);
  return (kernel_N(z_norm, d) - n1) / (kernel_N(s, d) - n1);
}

double eta_exact(int d) { return annulus_hit_exact(1.0 / 7.0, 0.5, d); }

double equilibrium_potential_sigma(double y_norm, double R, double rho, int d) {
  require_dim(d);
  if (!(R > 0.0) || !(rho > 0.0)) throw DomainError("equilibrium_potential_sigma: R, rho > 0");
  if (y_norm < 0.0) throw DomainError("equilibrium_potential_sigma: negative radius");
  const double outer = R + 2.0 * rho;
  if (y_norm >= outer) return 0.0;
  const double n_outer = kernel_N(outer, d);
  if (y_norm <= R) return kernel_N(R, d) - n_outer;
  return kernel_N(y_norm, d) - n_outer;
}

// ---------------------------------------------------------------------------

Gauge Gauge::phi_power(double eps) {
  if (!(eps > 0.0)) throw DomainError("phi-eps gauge needs eps > 0");
  Gauge g;
  g.kind_ = Kind::PhiPower;
  g.param_ = eps;
  return g;
}

Gauge Gauge::loglog() {
  Gauge g;
  g.kind_ = Kind::LogLog;
  g.param_ = 0.0;
  return g;
}

Gauge Gauge::power(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("power gauge needs alpha > 0");
  Gauge g;
  g.kind_ = Kind::Power;
  g.param_ = alpha;
  return g;
}

Gauge Gauge::tabulated(std::vector<double> t, std::vector<double> h) {
  if (t.size() != h.size() || t.size() < 2) {
    throw DomainError("tabulated gauge needs >= 2 matching (t, h) pairs");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0 && t[i] < 1.0)) throw DomainError("tabulated gauge: t outside (0,1)");
    if (!(h[i] > 0.0)) throw DomainError("tabulated gauge: h must be positive");
    if (i > 0 && !(t[i] > t[i - 1])) throw DomainError("tabulated gauge: t must increase");
  }
  Gauge g;
  g.kind_ = Kind::Tabulated;
  g.monotone_ = std::is_sorted(h.begin(), h.end());
  g.table_t_ = std::move(t);
  g.table_h_ = std::move(h);
  return g;
}

Gauge Gauge::custom(std::function<double(double)> h, bool monotone, std::string label) {
  Gauge g;
  g.kind_ = Kind::Custom;
  g.monotone_ = monotone;
  g.fn_ = std::move(h);
  g.label_ = std::move(label);
  return g;
}

Gauge Gauge::parse(const std::string& spec) {
  auto arg = [&](std::size_t prefix) {
    try {
      return std::stod(spec.substr(prefix));
    } catch (const std::exception&) {
      throw DomainError("bad gauge parameter in '" + spec + "'");
    }
  };
  if (spec == "loglog") return loglog();
  if (spec.rfind("phi-eps:", 0) == 0) return phi_power(arg(8));
  if (spec.rfind("power:", 0) == 0) return power(arg(6));
  throw DomainError("unknown gauge '" + spec + "'");
}

std::string Gauge::spec() const {
  switch (kind_) {
    case Kind::PhiPower: return "phi-eps:" + shortest(param_);
    case Kind::LogLog: return "loglog";
    case Kind::Power: return "power:" + shortest(param_);
    case Kind::Tabulated: return "tabulated";
    case Kind::Custom: return label_;
  }
  return "custom";
}

double Gauge::at_depth(double depth, int d) const {
  switch (kind_) {
    case Kind::PhiPower:
      return std::pow(capacity_phi_depth(depth, d), param_);
    case Kind::LogLog: {
      // log(1/phi(t)): log(depth) for d = 2, (d-2) depth otherwise.
      const double l = d == 2 ? std::log(depth) : (d - 2.0) * depth;
      if (!(l > std::exp(1.0))) return 1.0;
      return 1.0 / std::log(l);
    }
    case Kind::Power:
      return std::exp(-param_ * depth);
    case Kind::Tabulated: {
      const double lt = -depth;
      const double lt0 = std::log(table_t_.front());
      if (lt <= lt0) return table_h_.front() * std::exp(lt - lt0);
      if (lt >= std::log(table_t_.back())) return table_h_.back();
      auto it = std::upper_bound(table_t_.begin(), table_t_.end(), std::exp(lt));
      const std::size_t j = static_cast<std::size_t>(it - table_t_.begin());
      const double a = std::log(table_t_[j - 1]), b = std::log(table_t_[j]);
      const double w = (lt - a) / (b - a);
      return table_h_[j - 1] + w * (table_h_[j] - table_h_[j - 1]);
    }
    case Kind::Custom:
      return fn_(std::exp(-depth));
  }
  return 0.0;
}

double Gauge::operator()(double t, int d) const {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("gauge evaluated outside (0,1)");
  if (kind_ == Kind::Custom) return fn_(t);
  return at_depth(std::log(1.0 / t), d);
}

// ---------------------------------------------------------------------------

GaugeSet::GaugeSet(int d, Gauge h, MajorantGrid grid) : d_(d), h_(std::move(h)), grid_(grid) {
  require_dim(d);
  if (grid_.points < 2 || !(grid_.t_min > 0.0 && grid_.t_min < 1.0)) {
    throw DomainError("invalid majorant grid");
  }
  if (h_.monotone()) return;
  const double deep = std::log(1.0 / grid_.t_min);
  const int n = grid_.points;
  depths_.resize(static_cast<std::size_t>(n));
  running_max_.resize(static_cast<std::size_t>(n));
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    // s_0 = t_min up to s_{n-1} just below 1.
    const double di = deep * (1.0 - static_cast<double>(i) / n);
    best = std::max(best, h_.at_depth(di, d_));
    depths_[static_cast<std::size_t>(i)] = di;
    running_max_[static_cast<std::size_t>(i)] = best;
  }
}

double GaugeSet::majorant(double t) const {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("majorant evaluated outside (0,1)");
  return grid_max(std::log(1.0 / t), h_(t, d_));
}

double GaugeSet::majorant_depth(double depth) const {
  return grid_max(depth, h_.at_depth(depth, d_));
}

double GaugeSet::grid_max(double depth, double own) const {
  if (depths_.empty()) return own;
  // Last grid node with s_i <= t, i.e. depth_i >= depth.
  auto it = std::partition_point(depths_.begin(), depths_.end(),
                                 [depth](double di) { return di >= depth; });
  if (it == depths_.begin()) return own;
  const auto i = static_cast<std::size_t>(it - depths_.begin()) - 1;
  return std::max(own, running_max_[i]);
}

}  // namespace champagne
