#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "champagne/audit.hpp"
#include "champagne/builder.hpp"
#include "champagne/config_io.hpp"
#include "champagne/error.hpp"

using namespace champagne;

TEST_CASE("rho0 threshold examples") {
  CHECK(rho0_threshold(0.3, 3) == doctest::Approx(0.3 / 9.0).epsilon(1e-12));
  CHECK(rho0_threshold(0.3, 2) == doctest::Approx(0.005).epsilon(1e-12));
  CHECK(rho0_threshold(0.3, 4) == doctest::Approx(0.3 / 27.0).epsilon(1e-12));
  CHECK_THROWS_AS(rho0_threshold(0.4, 2), DomainError);
  CHECK_THROWS_AS(rho0_threshold(0.0, 3), DomainError);
}

TEST_CASE("radii below rho0 satisfy r < beta/3") {
  std::mt19937_64 eng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const int d = 2 + i % 3;
    const double rho = (1.0 / 3.0) * std::max(1e-9, u(eng));
    const double r = rho0_threshold(rho, d) * std::max(1e-12, u(eng));
    const double beta = layer_beta(std::log(1.0 / r), rho, d);
    if (!(r < beta / 3.0)) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("build_layer d=2 example") {
  const GaugeSet g(2, Gauge::phi_power(0.5));
  const auto L = build_layer(0.6, 0.1, std::exp(-20.0), g, 1);
  CHECK(L.beta == doctest::Approx(0.005).epsilon(1e-12));
  CHECK(L.count >= std::ceil(std::numbers::pi * 0.6 / 0.005));
  CHECK(L.materialized());
  CHECK(L.r() < L.beta / 3.0);
  CHECK(L.capacity_sum == doctest::Approx(L.count / 20.0).epsilon(1e-12));
}

TEST_CASE("build_layer d=3 example") {
  const GaugeSet g(3, Gauge::phi_power(0.5));
  BuildOptions opt;
  opt.max_points = 1e4;
  const auto L = build_layer(0.6, 0.1, 1e-4, g, 1, opt);
  CHECK_FALSE(L.materialized());
  CHECK(L.count == doctest::Approx(36.0 * 0.36 / 1e-5).epsilon(1e-12));
  CHECK(L.beta == doctest::Approx(3.1623e-3).epsilon(1e-4));
  CHECK(L.beta == doctest::Approx(std::sqrt(1e-5)).epsilon(1e-12));
  CHECK(L.r() < L.beta / 3.0);
  CHECK(L.count > 0.0);
}

TEST_CASE("build_layer rejects r at the threshold") {
  const GaugeSet g(2, Gauge::phi_power(0.5));
  const double r0 = rho0_threshold(0.1, 2);
  CHECK_THROWS_AS(build_layer(0.6, 0.1, r0, g, 1), BuildError);
  CHECK_NOTHROW(build_layer(0.6, 0.1, r0 * 0.999, g, 1));
  const GaugeSet g3(3, Gauge::phi_power(0.5));
  CHECK_THROWS_AS(build_layer(0.6, 0.1, rho0_threshold(0.1, 3), g3, 1), BuildError);
}

TEST_CASE("capacity sum of a layer is of order 1/rho") {
  const GaugeSet g(2, Gauge::phi_power(0.5));
  for (double rho : {0.2, 0.1, 0.05}) {
    const auto L = build_layer(0.6, rho, 1e-2 * rho0_threshold(rho, 2), g, 2);
    const double c = L.capacity_sum * rho;
    CHECK(c > 1.0);
    CHECK(c < 30.0);
  }
}

TEST_CASE("log2 tail and one-bubble radii") {
  double prev = -1e300;
  for (int k = 3; k < 200; k += 7) {
    const double R = 1.0 - log2_tail(k);
    CHECK(R > prev);
    prev = R;
  }
  CHECK(log2_tail(3) > log2_tail(4));
  CHECK(log2_tail(4) - log2_tail(5) ==
        doctest::Approx(1.0 / (4.0 * std::pow(std::log(4.0), 2))).epsilon(1e-9));
}

TEST_CASE("one-bubble sequence k=10 d=2") {
  const auto cfg = build_one_bubble_sequence(10, 12, 2, 1.0, 3);
  REQUIRE(cfg.stacks.size() == 1);
  const auto& L = cfg.stacks[0].layers[0];
  CHECK(L.rho == doctest::Approx(0.06286).epsilon(1e-3));
  CHECK(L.beta == doctest::Approx(6.286e-3).epsilon(1e-3));
  CHECK(L.r() == doctest::Approx(4.54e-5).epsilon(1e-3));
  CHECK(L.r() < L.beta / 3.0);
  for (const auto& M : cfg.stacks[0].layers) {
    const int k = M.index;
    CHECK(M.r() / (1.0 - M.R) < 1.0 / 9.0);
    CHECK(capacity_phi_depth(M.depth, 2) <= 1.0 / k);
  }
  CHECK(cfg.params.at("phi_le_k_pow_1_minus_d") == "true");
  CHECK(audit_config(cfg).ok());
}

TEST_CASE("one-bubble sequence k=27 d=3") {
  const auto cfg = build_one_bubble_sequence(27, 27, 3, 0.5, 3);
  const auto& L = cfg.stacks[0].layers[0];
  CHECK(L.r() == doctest::Approx(L.rho / (27.0 * 27.0)).epsilon(1e-12));
  CHECK(capacity_phi_depth(L.depth, 3) == doctest::Approx(L.r()).epsilon(1e-12));
  CHECK(capacity_phi_depth(L.depth, 3) <= 1.0 / (27.0 * 27.0));
  CHECK(L.r() < L.beta / 3.0);
  CHECK(audit_config(cfg).ok());
}

TEST_CASE("one-bubble start below k0 is rejected") {
  CHECK_FALSE(check_one_bubble_start(2, 2).ok);
  CHECK_FALSE(check_one_bubble_start(5, 3).ok);
  CHECK_FALSE(check_one_bubble_start(5, 3).failure.empty());
  CHECK_THROWS_AS(build_one_bubble_sequence(2, 4, 2, 1.0, 1), BuildError);
}

TEST_CASE("unit ball single layer uses half the budget") {
  const GaugeSet g(2, Gauge::power(2.0));
  const auto radii = radii_geometric(1);
  const auto cfg = build_unit_ball(g, 1e-3, radii, 1);
  CHECK(cfg.total_weighted_sum < 0.5e-3);
  CHECK(audit_config(cfg).ok());
}

TEST_CASE("unit ball budget telescopes") {
  const GaugeSet g(2, Gauge::power(2.0));
  const auto radii = radii_geometric(5);
  const auto cfg = build_unit_ball(g, 1e-3, radii, 4);
  double sum = 0.0;
  for (const auto& L : cfg.stacks[0].layers) {
    CHECK(L.weighted_sum < std::ldexp(1e-3, -L.index));
    sum += L.weighted_sum;
  }
  CHECK(sum == doctest::Approx(cfg.total_weighted_sum).epsilon(1e-12));
  CHECK(cfg.total_weighted_sum < 1e-3);
  CHECK(recompute_weighted_sum(cfg) == doctest::Approx(cfg.total_weighted_sum).epsilon(1e-12));
  AuditOptions opt;
  opt.brute_force_limit = 20000;
  const auto rep = audit_config(cfg, opt);
  CHECK(rep.ok());
}

TEST_CASE("unit ball build is deterministic") {
  const GaugeSet g(3, Gauge::power(2.0));
  const auto radii = radii_geometric(3);
  BuildOptions opt;
  opt.max_points = 5e4;
  CHECK(dump_config(build_unit_ball(g, 1e-2, radii, 9, opt)) ==
        dump_config(build_unit_ball(g, 1e-2, radii, 9, opt)));
}

TEST_CASE("unit ball rejects bad radii") {
  const GaugeSet g(2, Gauge::power(2.0));
  const std::vector<double> bad{0.6, 0.55, 0.9};
  CHECK_THROWS_AS(build_unit_ball(g, 1e-3, bad, 1), DomainError);
}

TEST_CASE("annulus layer count") {
  CHECK(annulus_layer_count(0.5, 0.2) == 4);
  CHECK(annulus_layer_count(1e-9, 0.2) == 1);
  CHECK(annulus_layer_count(0.5, 0.5) == 1);
  CHECK_THROWS_AS(annulus_layer_count(0.5, 0.0), DomainError);
}

TEST_CASE("annulus stack respects budgets and clearance") {
  const GaugeSet g(2, Gauge::power(2.0));
  const double a = 0.05, ap = a * 6.0 / 7.0, dy = 1e-4;
  const auto s = make_annulus_stack(a, ap, 0.5, dy, 0.2, g, 5);
  REQUIRE(s.layers.size() == 4);
  for (const auto& L : s.layers) {
    CHECK(L.R > ap / a);
    CHECK(L.R < 1.0);
    CHECK(6.0 * L.r() < 1.0 - L.R);
    CHECK(L.weighted_sum < std::ldexp(dy, -L.index));
  }
}

TEST_CASE("annulus filling is translation invariant") {
  const GaugeSet g(2, Gauge::power(2.0));
  const Vec y = make_vec({0.3, -0.2});
  const auto at_y = fill_annulus(y, 0.05, 0.04, 0.5, 1e-4, 0.3, g, 8);
  const auto at_0 = fill_annulus(Vec{}, 0.05, 0.04, 0.5, 1e-4, 0.3, g, 8);
  REQUIRE(at_y.stack.layers.size() == at_0.stack.layers.size());
  for (std::size_t j = 0; j < at_y.stack.layers.size(); ++j) {
    const auto& A = at_y.stack.layers[j];
    const auto& B = at_0.stack.layers[j];
    CHECK(A.R == B.R);
    CHECK(A.depth == B.depth);
    REQUIRE(A.materialized());
    REQUIRE(A.grid->size() == B.grid->size());
    for (std::size_t i = 0; i < A.grid->size(); ++i) {
      const Vec p = at_y.placement.center + at_y.placement.scale * A.grid->points()[i];
      const Vec q = at_0.placement.center + at_0.placement.scale * B.grid->points()[i];
      CHECK(distance(p - y, q) < 1e-15);
    }
  }
  CHECK(at_y.placement.weighted_sum == at_0.placement.weighted_sum);
  CHECK(at_y.placement.weighted_sum < 1e-4);
}

TEST_CASE("annulus filler reports an oversize layer count") {
  const GaugeSet g(2, Gauge::power(2.0));
  BuildOptions opt;
  opt.max_layers = 8;
  CHECK_THROWS_AS(make_annulus_stack(0.05, 0.04, 0.5, 1e-4, 1e-3, g, 1, opt), BuildError);
}

TEST_CASE("general build on a ball") {
  const Domain U = Domain::ball(Vec{}, 1.0, 2);
  const auto ex = make_exhaustion(U, 3);
  const GaugeSet g(2, Gauge::power(2.0));
  const auto cfg = build_general(U, ex, g, 1e-2, 0.3, 4);
  CHECK(cfg.total_weighted_sum < 1e-2);
  CHECK(cfg.clearance_factor == 18.0);
  AuditOptions opt;
  opt.brute_force_limit = 20000;
  const auto rep = audit_config(cfg, opt);
  for (const auto& i : rep.issues) MESSAGE(i.check << ": " << i.detail);
  CHECK(rep.ok());
}

TEST_CASE("general build with a single annulus center") {
  const Domain U = Domain::ball(Vec{}, 1.0, 2);
  const auto ex = make_exhaustion(U, 1, 0.99, 0.1);
  const GaugeSet g(2, Gauge::power(2.0));
  const auto cfg = build_general(U, ex, g, 1e-2, 0.3, 4);
  REQUIRE(cfg.placements.size() == 1);
  CHECK(cfg.placements[0].level == 1);
  CHECK(cfg.placements[0].budget == doctest::Approx(1e-2 / 2.0).epsilon(1e-12));
  CHECK(audit_config(cfg).ok());
}

TEST_CASE("ladder bound examples") {
  const std::vector<double> zeros(5, 0.0);
  CHECK(ladder_bound(zeros) == 0.0);
  const std::vector<double> one{0.2, 1.0, 0.1};
  CHECK(ladder_bound(one) == 1.0);
  const std::vector<double> tenths(20, 0.1);
  CHECK(ladder_bound(tenths) == doctest::Approx(1.0 - std::pow(0.9, 20)).epsilon(1e-12));
  CHECK(ladder_bound(tenths) == doctest::Approx(0.8784).epsilon(1e-4));
  const std::vector<double> bad{1.5};
  CHECK_THROWS_AS(ladder_bound(bad), DomainError);
}
