#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "champagne/bubbles.hpp"
#include "champagne/error.hpp"
#include "champagne/geometry.hpp"

using namespace champagne;

namespace {

Vec random_point(std::mt19937_64& eng, int d, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec p;
  for (int i = 0; i < d; ++i) p[i] = u(eng);
  return p;
}

double brute_nearest(const std::vector<Bubble>& bs, const Vec& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : bs) best = std::min(best, distance(p, b.center) - b.radius);
  return best;
}

}  // namespace

TEST_CASE("signed distance examples") {
  const auto ball = Domain::ball(Vec{}, 1.0, 2);
  CHECK(ball.signed_distance(Vec{}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(ball.signed_distance(make_vec({2.0, 0.0})) == doctest::Approx(1.0).epsilon(1e-12));
  const auto box = Domain::box(Vec{}, make_vec({2.0, 1.0}), 2);
  CHECK(box.signed_distance(make_vec({1.0, 0.5})) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(box.signed_distance(make_vec({3.0, 2.0})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(box.signed_distance(make_vec({2.0, 0.5})) == doctest::Approx(0.0));
}

TEST_CASE("L-shape distance equals the minimum over its boxes") {
  const auto L = Domain::lshape(1.0);
  const auto a = Domain::box(Vec{}, make_vec({2.0, 1.0}), 2);
  const auto b = Domain::box(Vec{}, make_vec({1.0, 2.0}), 2);
  std::mt19937_64 eng(1);
  for (int i = 0; i < 2000; ++i) {
    const Vec p = random_point(eng, 2, -0.5, 2.5);
    CHECK(L.signed_distance(p) == std::min(a.signed_distance(p), b.signed_distance(p)));
  }
  CHECK(L.contains(make_vec({0.5, 1.5})));
  CHECK(L.contains(make_vec({1.5, 0.5})));
  CHECK_FALSE(L.contains(make_vec({1.5, 1.5})));
}

TEST_CASE("distance oracles are 1-Lipschitz") {
  const std::vector<Domain> zoo{
      Domain::ball(make_vec({0.1, 0.2}), 0.7, 2),
      Domain::box(make_vec({-1.0, 0.0, 0.0}), make_vec({1.0, 0.5, 2.0}), 3),
      Domain::lshape(1.0),
      Domain::intersect({Domain::ball(Vec{}, 1.0, 2), Domain::box(Vec{}, make_vec({2.0, 2.0}), 2)}),
      Domain::unite({Domain::ball(Vec{}, 0.5, 3), Domain::ball(make_vec({2.0}), 0.5, 3)}),
  };
  std::mt19937_64 eng(2);
  for (const auto& D : zoo) {
    for (int i = 0; i < 5000; ++i) {
      const Vec p = random_point(eng, D.d(), -2.0, 3.0);
      const Vec q = random_point(eng, D.d(), -2.0, 3.0);
      CHECK(std::abs(D.signed_distance(p) - D.signed_distance(q)) <= distance(p, q) + 1e-12);
    }
  }
}

TEST_CASE("boundary samples lie on the boundary") {
  const auto ball = Domain::ball(make_vec({0.5, 0.0, 0.0}), 0.8, 3);
  for (const auto& p : sample_boundary(ball, 500, 1)) {
    CHECK(distance(p, ball.center()) == doctest::Approx(0.8).epsilon(1e-12));
  }
  const auto box = Domain::box(Vec{}, make_vec({2.0, 1.0}), 2);
  const auto pts = sample_boundary(box, 400, 1);
  CHECK(pts.size() >= 300);
  for (const auto& p : pts) {
    const bool on_face = std::abs(p[0]) < 1e-12 || std::abs(p[0] - 2.0) < 1e-12 ||
                         std::abs(p[1]) < 1e-12 || std::abs(p[1] - 1.0) < 1e-12;
    CHECK(on_face);
  }
  const auto L = Domain::lshape(1.0);
  const auto lp = sample_boundary(L, 800, 1);
  CHECK(lp.size() >= 400);
  for (const auto& p : lp) CHECK(std::abs(L.signed_distance(p)) < 1e-9);
}

TEST_CASE("ball exhaustion gaps") {
  const auto ex = make_exhaustion(Domain::ball(Vec{}, 1.0, 2), 4, 0.25, 0.5);
  REQUIRE(ex.size() == 4);
  for (std::size_t i = 0; i < ex.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    CHECK(ex.offsets[i] == doctest::Approx(std::ldexp(1.0, -n - 1)).epsilon(1e-12));
    CHECK(ex.levels[i].radius() == doctest::Approx(1.0 - std::ldexp(1.0, -n - 1)).epsilon(1e-12));
    CHECK(ex.gaps[i] == doctest::Approx(std::min(std::ldexp(1.0, -n - 2), 1.0 / n)).epsilon(1e-6));
  }
}

TEST_CASE("single-level exhaustion uses only the outer side") {
  const auto ex = make_exhaustion(Domain::ball(Vec{}, 1.0, 2), 1, 0.5, 0.5);
  REQUIRE(ex.size() == 1);
  CHECK(ex.gaps[0] == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("box exhaustion shrinks every side") {
  const auto box = Domain::box(Vec{}, make_vec({2.0, 1.0}), 2);
  const auto ex = make_exhaustion(box, 2, 0.2, 0.5);
  const auto& v = ex.levels[0];
  CHECK(v.kind() == Domain::Kind::Box);
  CHECK(v.lo()[0] == doctest::Approx(0.2));
  CHECK(v.lo()[1] == doctest::Approx(0.2));
  CHECK(v.hi()[0] == doctest::Approx(1.8));
  CHECK(v.hi()[1] == doctest::Approx(0.8));
}

TEST_CASE("exhaustion levels are nested") {
  const auto ex = make_exhaustion(Domain::lshape(1.0), 3, 0.3, 0.5);
  for (std::size_t i = 0; i + 1 < ex.levels.size(); ++i) {
    double worst = -1e300;
    for (const auto& p : sample_boundary(ex.levels[i], 2000, 3)) {
      worst = std::max(worst, ex.levels[i + 1].signed_distance(p));
    }
    CHECK(worst < 0.0);
  }
  for (double g : ex.gaps) CHECK(g > 0.0);
}

TEST_CASE("exhaustion rejects offsets that disconnect the domain") {
  const auto U = Domain::unite({Domain::box(Vec{}, make_vec({1.0, 1.0}), 2),
                                Domain::box(make_vec({0.95, 0.0}), make_vec({2.0, 1.0}), 2)});
  CHECK(is_connected(U));
  CHECK_THROWS_AS(make_exhaustion(U, 2, 0.1, 0.5), DomainError);
}

TEST_CASE("nearest bubble examples") {
  BubbleSet one(2);
  one.add_bubble({Vec{}, 0.1, 0});
  one.finalize();
  const auto n = one.nearest(make_vec({0.5, 0.0}));
  CHECK(n.distance == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(n.found);

  BubbleSet two(2);
  two.add_bubble({make_vec({-1.0, 0.0}), 0.2, 0});
  two.add_bubble({make_vec({1.0, 0.0}), 0.2, 0});
  two.finalize();
  const auto m = two.nearest(make_vec({0.0, 0.5}));
  CHECK(m.distance == doctest::Approx(std::sqrt(1.25) - 0.2).epsilon(1e-12));
  CHECK(m.id.shell == -1);
  CHECK(two.nearest(make_vec({-1.0, 0.0})).distance < 0.0);
}

TEST_CASE("index agrees with brute force on 1e4 bubbles") {
  std::mt19937_64 eng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Bubble> all;
  BubbleSet set(2);
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const Bubble b{make_vec({i * 0.01 + 0.005, j * 0.01 + 0.005}), 0.001 + 0.003 * u(eng), 0};
      all.push_back(b);
      set.add_bubble(b);
    }
  }
  set.finalize();
  CHECK(set.bubble_count() == 10000);
  for (int k = 0; k < 1000; ++k) {
    const Vec p = random_point(eng, 2, -0.2, 1.2);
    const double exact = brute_nearest(all, p);
    CHECK(set.nearest(p).distance == doctest::Approx(exact).epsilon(1e-12));
    bool hit = false;
    const double step = set.step_bound(p, 10.0, hit);
    CHECK(step <= exact + 1e-15);
    if (hit) CHECK(step == doctest::Approx(exact).epsilon(1e-12));
  }
  CHECK(set.overlaps().empty());
  CHECK(set.overlaps_brute_force().empty());
}

TEST_CASE("index agrees with brute force on shells") {
  auto grid = std::make_shared<PointGrid>(2, 0.1);
  for (int i = 0; i < 40; ++i) {
    const double th = 2.0 * 3.141592653589793 * i / 40.0;
    grid->insert(make_vec({0.5 * std::cos(th), 0.5 * std::sin(th)}));
  }
  BubbleSet set(2);
  std::vector<Bubble> all;
  for (int s = 0; s < 30; ++s) {
    Shell sh;
    sh.origin = make_vec({0.3 * (s % 6), 0.3 * (s / 6)});
    sh.scale = 0.2;
    sh.local_R = 0.5;
    sh.bubble_radius = 0.002;
    sh.local = grid;
    for (std::size_t i = 0; i < sh.size(); ++i) all.push_back({sh.center(i), sh.bubble_radius, 0});
    set.add_shell(sh);
  }
  set.finalize();
  std::mt19937_64 eng(5);
  for (int k = 0; k < 1000; ++k) {
    const Vec p = random_point(eng, 2, -0.2, 1.8);
    CHECK(set.nearest(p).distance == doctest::Approx(brute_nearest(all, p)).epsilon(1e-12));
  }
}

TEST_CASE("planted overlap is found by both checks") {
  BubbleSet set(2);
  for (int i = 0; i < 50; ++i) set.add_bubble({make_vec({0.1 * i, 0.0}), 0.01, 0});
  set.add_bubble({make_vec({1.205, 0.0}), 0.01, 1});
  set.finalize();
  const auto fast = set.overlaps();
  const auto slow = set.overlaps_brute_force();
  REQUIRE(fast.size() == 1);
  REQUIRE(slow.size() == 1);
  CHECK(fast[0].gap == doctest::Approx(slow[0].gap));
  CHECK(fast[0].gap < 0.0);
  const auto ids = std::minmax(fast[0].a.index, fast[0].b.index);
  CHECK(ids.first == 12);
  CHECK(ids.second == 50);
}
