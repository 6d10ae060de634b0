#pragma once

// Kernel and capacity functions of the ambient dimension, gauge functions
// h with their increasing majorants, and closed-form potentials used as
// oracles by the verifier.

#include <functional>
#include <string>
#include <vector>

namespace champagne {

/// N(t) = log(1/t) for d = 2, t^{2-d} for d >= 3. Throws DomainError for t <= 0.
double kernel_N(double t, int d);

/// phi(t) = 1/N(t). For d = 2 requires t < 1.
double capacity_phi(double t, int d);

/// phi evaluated from depth = log(1/t); avoids underflow for tiny radii.
double capacity_phi_depth(double depth, int d);

/// Probability that Brownian motion started on |z| = z_norm hits the closed
/// ball of radius s before leaving the unit ball.
double annulus_hit_exact(double s, double z_norm, int d);

/// The hitting constant for B(0,1) \ closed B(0,1/7) from |z| = 1/2:
/// log 2/log 7 for d = 2, (2^{d-2}-1)/(7^{d-2}-1) for d >= 3.
double eta_exact(int d);

/// Green potential of normalized surface measure on the sphere |y| = R with
/// respect to B(0, R + 2 rho), as a function of |y|.
double equilibrium_potential_sigma(double y_norm, double R, double rho, int d);

/// User gauge h : (0,1) -> (0,1) with h(t) -> 0. Evaluated through the
/// depth log(1/t) so radii far below the double range stay usable.
class Gauge {
 public:
  enum class Kind { PhiPower, LogLog, Power, Tabulated, Custom };

  static Gauge phi_power(double eps);
  static Gauge loglog();
  static Gauge power(double alpha);
  /// Piecewise log-linear table over t; nondecreasing tables are flagged monotone.
  /// Below the first node h is extrapolated linearly in t towards 0.
  static Gauge tabulated(std::vector<double> t, std::vector<double> h);
  static Gauge custom(std::function<double(double)> h, bool monotone,
                      std::string label = "custom");
  /// "phi-eps:<e>", "loglog", "power:<a>". Tabulated gauges come from files.
  static Gauge parse(const std::string& spec);

  double at_depth(double depth, int d) const;
  double operator()(double t, int d) const;

  Kind kind() const { return kind_; }
  bool monotone() const { return monotone_; }
  double parameter() const { return param_; }
  const std::vector<double>& table_t() const { return table_t_; }
  const std::vector<double>& table_h() const { return table_h_; }
  /// Round-trippable text form (tabulated gauges report "tabulated").
  std::string spec() const;

 private:
  Kind kind_ = Kind::PhiPower;
  double param_ = 0.5;
  bool monotone_ = true;
  std::vector<double> table_t_, table_h_;
  std::function<double(double)> fn_;
  std::string label_;
};

struct MajorantGrid {
  int points = 4096;
  double t_min = 1e-12;
};

/// Dimension plus gauge, with the smallest increasing majorant
/// h^(t) = sup{h(s) : 0 < s <= t} evaluated as max{h(t), h(s_i) : s_i <= t}
/// over a fixed log-spaced grid s_i in [t_min, 1).
class GaugeSet {
 public:
  GaugeSet(int d, Gauge h, MajorantGrid grid = {});

  int d() const { return d_; }
  const Gauge& h() const { return h_; }
  const MajorantGrid& grid() const { return grid_; }

  double h_at(double t) const { return h_(t, d_); }
  double h_at_depth(double depth) const { return h_.at_depth(depth, d_); }
  double majorant(double t) const;
  double majorant_depth(double depth) const;
  /// Grid depths log(1/s_i), decreasing (s_i increasing); empty for monotone gauges.
  const std::vector<double>& grid_depths() const { return depths_; }

 private:
  double grid_max(double depth, double own) const;

  int d_;
  Gauge h_;
  MajorantGrid grid_;
  std::vector<double> depths_;
  std::vector<double> running_max_;
};

}  // namespace champagne
