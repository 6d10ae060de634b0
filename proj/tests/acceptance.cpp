// Acceptance suite: one PASS/FAIL line per criterion, with timings.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "champagne/audit.hpp"
#include "champagne/builder.hpp"
#include "champagne/gauge.hpp"
#include "champagne/rng.hpp"
#include "champagne/sphere_design.hpp"
#include "champagne/verifier.hpp"
#include "champagne/wos.hpp"

using namespace champagne;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void note(const char* fmt, double a = 0, double b = 0, double c = 0, double d = 0, double e = 0) {
  std::printf("    ");
  std::printf(fmt, a, b, c, d, e);
  std::printf("\n");
  std::fflush(stdout);
}

Outcome exact_constants() {
  const double e2 = eta_exact(2), e3 = eta_exact(3);
  const double t2 = std::log(2.0) / std::log(7.0), t3 = 1.0 / 6.0;
  note("eta(2) = %.15f (log 2/log 7 = %.15f)", e2, t2);
  note("eta(3) = %.15f (1/6 = %.15f)", e3, t3);
  const bool ok = std::abs(e2 - t2) <= 1e-12 * t2 && std::abs(e3 - t3) <= 1e-12 * t3;
  return {ok, "12 significant digits"};
}

Outcome wos_vs_closed_form(int d, double limit_s) {
  const auto t0 = std::chrono::steady_clock::now();
  BubbleSet A(d);
  A.add_bubble(Bubble{Vec{}, 1.0 / 7.0, 0});
  A.finalize();
  WosOptions opt;
  opt.samples = 100000;
  opt.epsilon = 1e-4;
  opt.seed = 20 + static_cast<std::uint64_t>(d);
  Vec z;
  z[0] = 0.5;
  const auto e = wos_hit_probability(Domain::ball(Vec{}, 1.0, d), A, z, opt);
  const double exact = annulus_hit_exact(1.0 / 7.0, 0.5, d);
  const double err = std::abs(e.p_hat - exact);
  const double tol = std::max(3.0 * e.half_width(), 5e-3);
  const double t = elapsed(t0);
  note("d=%g p_hat=%.5f exact=%.5f |err|=%.5f tol=%.5f", d, e.p_hat, exact, err, tol);
  note("d=%g time %.1f s", d, t);
  return {err <= tol && t < limit_s, "d=" + std::to_string(d)};
}

Outcome unit_ball_budget(int d) {
  const auto t0 = std::chrono::steady_clock::now();
  const GaugeSet gauges(d, Gauge::phi_power(0.5));
  const auto radii = radii_geometric(8);
  const auto cfg = build_unit_ball(gauges, 1e-3, radii, 11);
  const auto rep = audit_config(cfg);
  const double sum = recompute_weighted_sum(cfg);
  const double t = elapsed(t0);
  note("d=%g sum phi(r)h(r) = %.6g over %.3g bubbles, audit issues %g, time %.2f s", d, sum,
       cfg.bubble_count(), static_cast<double>(rep.issues.size()), t);
  for (const auto& i : rep.issues) std::printf("    issue %s: %s\n", i.check.c_str(), i.detail.c_str());
  const bool six = cfg.clearance_factor == 6.0;
  return {sum < 1e-3 && rep.ok() && six && t < 60.0, "d=" + std::to_string(d)};
}

Outcome uniform_kappa(int d) {
  const auto t0 = std::chrono::steady_clock::now();
  const double R = 0.6, rho = 0.1;
  const GaugeSet gauges(d, Gauge::phi_power(0.5));
  const double r_max = rho0_threshold(rho, d) * (1.0 - 1e-6);
  double kappas[2] = {0, 0};
  bool positive = true;
  for (int i = 0; i < 2; ++i) {
    const double r = i == 0 ? r_max : r_max / 100.0;
    const auto L = build_layer(R, rho, r, gauges, 40 + static_cast<std::uint64_t>(i));
    WosOptions opt;
    opt.samples = 20000;
    opt.epsilon = 1e-3 * r;
    opt.seed = 400 + static_cast<std::uint64_t>(10 * d + i);
    const auto k = layer_kappa_estimate(L, d, 16, opt);
    kappas[i] = k.kappa;
    positive = positive && k.kappa_low > 0.0;
    note("d=%g r=%.4g #X=%g kappa_low=%.4f kappa=%.4f", d, r, L.count, k.kappa_low, k.kappa);
  }
  const double ratio = std::max(kappas[0], kappas[1]) / std::max(1e-300, std::min(kappas[0], kappas[1]));
  const double t = elapsed(t0);
  note("d=%g ratio=%.3f time %.1f s", d, ratio, t);
  return {positive && ratio <= 3.0 && t < 600.0, "d=" + std::to_string(d)};
}

Outcome ladder_consistency() {
  const auto t0 = std::chrono::steady_clock::now();
  const GaugeSet gauges(2, Gauge::power(2.0));
  const auto cfg = build_unit_ball(gauges, 1e-3, radii_geometric(6), 5);
  double rmin = 1.0;
  for (const auto& L : cfg.stacks[0].layers) rmin = std::min(rmin, L.r());
  WosOptions kopt;
  kopt.samples = 5000;
  kopt.epsilon = 1e-3 * rmin;
  kopt.seed = 501;
  WosOptions dopt = kopt;
  dopt.samples = 20000;
  dopt.seed = 502;
  const auto rep = unavoidability_report(cfg, 6, 8, kopt, dopt, Vec{});
  for (const auto& row : rep.rows) {
    note("layer %g R=%.5f r=%.3g #X=%g kappa=%.4f", row.layer, row.R, row.r, row.count, row.kappa.kappa);
  }
  note("ladder=%.4f (sigma %.4f) direct=%.4f margin=%.4f", rep.ladder, rep.ladder_sigma, rep.direct.p_hat,
       rep.margin);
  double prev = -1.0;
  bool monotone = true;
  for (int K : {2, 4, 6}) {
    const auto e = wos_hit_probability(cfg.domain, cfg.bubble_set(K), Vec{}, dopt);
    note("truncation K=%g direct=%.4f +- %.4f", K, e.p_hat, e.half_width());
    monotone = monotone && e.p_hat >= prev;
    prev = e.p_hat;
  }
  const double t = elapsed(t0);
  note("time %.1f s", t);
  return {rep.consistent && monotone && t < 900.0, "K=6"};
}

Outcome one_bubble_minorant_check() {
  const auto t0 = std::chrono::steady_clock::now();
  const int k = 10;
  const auto cfg = build_one_bubble_sequence(k, k + 1, 2, 1.0, 61);
  const auto& L = cfg.stacks[0].layers[0];
  const auto& next = cfg.stacks[0].layers[1];
  const Vec x = L.grid->points()[0];
  const double r = L.r();
  BubbleSet E(2);
  E.add_bubble(Bubble{x, r, k});
  E.finalize();
  const Domain V = Domain::ball(Vec{}, next.R, 2);
  const double bound = 2.0 / (3.0 * k);
  const double theta = std::atan2(x[1], x[0]);
  bool ok = true;
  for (int i = 0; i < 8; ++i) {
    const double chord = L.beta * (i + 1) / 9.0;
    const double dt = 2.0 * std::asin(chord / (2.0 * L.R));
    const Vec z = L.R * make_vec({std::cos(theta + dt), std::sin(theta + dt)});
    WosOptions opt;
    opt.samples = 20000;
    opt.epsilon = 1e-3 * r;
    opt.seed = 600 + static_cast<std::uint64_t>(i);
    const auto e = wos_hit_probability(V, E, z, opt);
    const double g = one_bubble_minorant(L.depth, distance(z, x), L.beta, 2);
    note("|z-x|/beta=%.3f p_hat=%.4f +3sigma=%.4f g(z)=%.4f bound=%.4f", distance(z, x) / L.beta, e.p_hat,
         e.p_hat + 3.0 * e.sigma(), g, bound);
    ok = ok && e.p_hat + 3.0 * e.sigma() >= bound;
  }
  const double t = elapsed(t0);
  note("time %.1f s", t);
  return {ok && t < 300.0, "k=10, d=2"};
}

Outcome general_domain() {
  const auto t0 = std::chrono::steady_clock::now();
  const Domain U = Domain::lshape(1.0);
  const GaugeSet gauges(2, Gauge::power(2.0));
  const double delta = 1e-2;
  const auto ex = make_exhaustion(U, 4, 0.4, 0.5);
  for (std::size_t n = 0; n < ex.size(); ++n) {
    note("level %g offset %.4f d_n %.4f", static_cast<double>(n + 1), ex.offsets[n], ex.gaps[n]);
  }
  WosOptions kopt;
  kopt.samples = 4000;
  kopt.epsilon = 0.0;
  kopt.seed = 701;
  const auto ref = general_reference_kappa(ex, gauges, delta, 3, 8, kopt, 7);
  for (const auto& k : ref.layers) note("reference layer kappa_low=%.4f kappa=%.4f", k.kappa_low, k.kappa);
  note("kappa_hat (min lower bound) = %.4f", ref.kappa_low);
  if (!(ref.kappa_low > 0.0)) return {false, "kappa lower bound is 0"};
  const auto cfg = build_general(U, ex, gauges, delta, ref.kappa_low, 7);
  note("annulus layers %g, placements %g, bubbles %.4g, sum %.4g", static_cast<double>(cfg.stacks[0].layers.size()),
       static_cast<double>(cfg.placements.size()), cfg.bubble_count(), cfg.total_weighted_sum);
  const auto rep = audit_config(cfg);
  for (const auto& i : rep.issues) std::printf("    issue %s: %s\n", i.check.c_str(), i.detail.c_str());
  note("audit %g issues, time so far %.1f s", static_cast<double>(rep.issues.size()), elapsed(t0));
  const auto A = cfg.bubble_set();
  double rmin = 1.0;
  for (const auto& p : cfg.placements) {
    for (const auto& L : cfg.stacks[static_cast<std::size_t>(p.stack)].layers) {
      rmin = std::min(rmin, p.scale * L.r());
    }
  }
  bool hits = true;
  const Vec starts[3] = {make_vec({0.5, 0.5}), make_vec({1.5, 0.5}), make_vec({0.5, 1.5})};
  for (int i = 0; i < 3; ++i) {
    WosOptions opt;
    opt.samples = 4000;
    opt.epsilon = 1e-3 * rmin;
    opt.seed = 710 + static_cast<std::uint64_t>(i);
    const auto e = wos_hit_probability(U, A, starts[i], opt);
    note("start (%.1f, %.1f) p_hat=%.4f ci=[%.4f, %.4f]", starts[i][0], starts[i][1], e.p_hat, e.ci_low,
         e.ci_high);
    hits = hits && e.p_hat >= 0.9;
  }
  const double t = elapsed(t0);
  note("time %.1f s", t);
  return {rep.ok() && hits && t < 1200.0, "L-shape, 4 levels"};
}

Outcome covering_packing() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  for (int d : {2, 3}) {
    double lo = 1e300, hi = 0.0;
    for (double beta : {0.02, 0.05, 0.1, 0.2}) {
      const auto ps = design_sphere_points(1.0, beta, d, 800 + static_cast<std::uint64_t>(d));
      const double ratio = static_cast<double>(ps.points.size()) * std::pow(beta, d - 1);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      const bool pack = ps.min_pairwise_distance >= 2.0 * beta / 3.0;
      const bool cover = ps.covering_radius_measured <= beta;
      note("d=%g beta=%.2f #X=%g packing/beta=%.3f", d, beta,
           static_cast<double>(ps.points.size()), ps.min_pairwise_distance / beta);
      note("    covering/beta=%.3f ratio=%.3f", ps.covering_radius_measured / beta, ratio);
      ok = ok && pack && cover;
    }
    note("d=%g ratio spread %.3f", d, hi / lo);
    ok = ok && hi / lo < 4.0;
  }
  const double t = elapsed(t0);
  note("time %.1f s", t);
  return {ok && t < 120.0, "beta in {0.02,0.05,0.1,0.2}, d in {2,3}"};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 exact constants", exact_constants},
      {"AC2 WoS vs closed form (d=2)", [] { return wos_vs_closed_form(2, 120.0); }},
      {"AC2 WoS vs closed form (d=3)", [] { return wos_vs_closed_form(3, 120.0); }},
      {"AC3 unit-ball budget (d=2)", [] { return unit_ball_budget(2); }},
      {"AC3 unit-ball budget (d=3)", [] { return unit_ball_budget(3); }},
      {"AC4 uniform kappa (d=2)", [] { return uniform_kappa(2); }},
      {"AC4 uniform kappa (d=3)", [] { return uniform_kappa(3); }},
      {"AC5 ladder consistency", ladder_consistency},
      {"AC6 one-bubble minorant", one_bubble_minorant_check},
      {"AC7 general domain", general_domain},
      {"AC8 covering/packing", covering_packing},
  };
  const char* only = argc > 1 ? argv[1] : nullptr;
  int failures = 0;
  for (auto& [name, run] : criteria) {
    if (only && name.rfind(only, 0) != 0) continue;
    std::printf("%s\n", name.c_str());
    std::fflush(stdout);
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s (%s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
