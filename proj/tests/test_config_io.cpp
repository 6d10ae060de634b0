#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include "champagne/audit.hpp"
#include "champagne/builder.hpp"
#include "champagne/config_io.hpp"
#include "champagne/error.hpp"
#include "champagne/render.hpp"

using namespace champagne;

namespace {

ChampagneConfig small_unit_ball(int d) {
  const GaugeSet g(d, Gauge::power(2.0));
  const auto radii = radii_geometric(2);
  BuildOptions opt;
  opt.max_points = 2e4;
  return build_unit_ball(g, 1e-3, radii, 6, opt);
}

bool has_issue(const AuditReport& rep, const std::string& check) {
  for (const auto& i : rep.issues) {
    if (i.check == check) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("config round-trip is bit-exact") {
  for (int d = 2; d <= 3; ++d) {
    const auto cfg = small_unit_ball(d);
    const std::string text = dump_config(cfg);
    const auto back = config_from_json(nlohmann::json::parse(text));
    CHECK(dump_config(back) == text);
    CHECK(back.total_weighted_sum == cfg.total_weighted_sum);
    REQUIRE(back.stacks.size() == cfg.stacks.size());
    const auto& a = cfg.stacks[0].layers;
    const auto& b = back.stacks[0].layers;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].depth == b[i].depth);
      CHECK(a[i].beta == b[i].beta);
      REQUIRE(a[i].materialized() == b[i].materialized());
      if (a[i].materialized()) CHECK(a[i].grid->points() == b[i].grid->points());
    }
  }
}

TEST_CASE("config round-trip through a file") {
  const auto cfg = build_one_bubble_sequence(10, 12, 2, 1.0, 2);
  const auto path = (std::filesystem::temp_directory_path() / "champagne_rt.json").string();
  save_config(cfg, path);
  const auto back = load_config(path);
  CHECK(dump_config(back) == dump_config(cfg));
  CHECK(back.params == cfg.params);
  std::filesystem::remove(path);
}

TEST_CASE("general config round-trip keeps the exhaustion") {
  const Domain U = Domain::lshape(1.0);
  const auto ex = make_exhaustion(U, 2, 0.4, 0.5);
  const auto cfg = build_general(U, ex, GaugeSet(2, Gauge::power(2.0)), 1e-2, 0.4, 3);
  const auto back = config_from_json(config_to_json(cfg));
  REQUIRE(back.exhaustion.has_value());
  CHECK(back.exhaustion->gaps == ex.gaps);
  CHECK(back.domain == U);
  CHECK(dump_config(back) == dump_config(cfg));
}

TEST_CASE("malformed configs are rejected") {
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse("{}")), InvariantViolation);
  auto j = config_to_json(small_unit_ball(2));
  j["version"] = 99;
  CHECK_THROWS_AS(config_from_json(j), InvariantViolation);
  auto k = config_to_json(small_unit_ball(2));
  k["stacks"][0]["layers"][0]["points"][0] = "x";
  CHECK_THROWS_AS(config_from_json(k), InvariantViolation);
}

TEST_CASE("gauges serialize as presets or tables") {
  for (const auto& g : {Gauge::phi_power(0.25), Gauge::loglog(), Gauge::power(3.0)}) {
    CHECK(gauge_from_json(gauge_to_json(g)).spec() == g.spec());
  }
  const auto t = Gauge::tabulated({0.01, 0.1}, {0.2, 0.3});
  const auto back = gauge_from_json(gauge_to_json(t));
  CHECK(back.table_t() == t.table_t());
  CHECK(back.table_h() == t.table_h());
  CHECK_THROWS(gauge_to_json(Gauge::custom([](double s) { return s; }, true)));
}

TEST_CASE("gauge table files are parsed") {
  const auto path = (std::filesystem::temp_directory_path() / "champagne_gauge.txt").string();
  write_text_file(path, "# t h\n0.01 0.1\n0.1 0.2\n\n0.5 0.4\n");
  const auto g = load_gauge_table(path);
  CHECK(g.table_t().size() == 3);
  CHECK(g(0.1, 2) == doctest::Approx(0.2));
  std::filesystem::remove(path);
}

TEST_CASE("audit passes on a fresh build") {
  AuditOptions opt;
  opt.brute_force_limit = 50000;
  const auto rep = audit_config(small_unit_ball(2), opt);
  CHECK(rep.ok());
  CHECK(rep.materialized_bubbles > 0);
  CHECK_FALSE(rep.passed.empty());
}

TEST_CASE("audit names an injected overlapping pair") {
  auto cfg = small_unit_ball(2);
  const auto& L = cfg.stacks[0].layers[0];
  const Vec c = L.grid->points()[3];
  cfg.loose.push_back({c * 1.0, L.r(), 99});
  cfg.seal();
  AuditOptions opt;
  opt.brute_force_limit = 50000;
  const auto rep = audit_config(cfg, opt);
  CHECK_FALSE(rep.ok());
  REQUIRE(has_issue(rep, "disjointness"));
  bool named = false;
  for (const auto& i : rep.issues) {
    if (i.check == "disjointness" && i.detail.find("bubble[0]") != std::string::npos &&
        i.detail.find("point 3") != std::string::npos) {
      named = true;
    }
  }
  CHECK(named);
  CHECK_FALSE(has_issue(rep, "index-vs-brute-force"));
}

TEST_CASE("audit catches a tampered total and a broken layer") {
  auto cfg = small_unit_ball(2);
  cfg.total_weighted_sum *= 0.5;
  CHECK(has_issue(audit_config(cfg), "stored-total"));
  auto bad = small_unit_ball(2);
  bad.stacks[0].layers[0].beta *= 1.01;
  CHECK(has_issue(audit_config(bad), "beta-definition"));
  auto over = small_unit_ball(2);
  over.delta = over.total_weighted_sum * 0.5;
  CHECK(has_issue(audit_config(over), "budget"));
}

TEST_CASE("audit catches a bubble too close to the boundary") {
  auto cfg = small_unit_ball(2);
  cfg.loose.push_back({make_vec({0.99, 0.0}), 0.005, 5});
  cfg.seal();
  CHECK(has_issue(audit_config(cfg), "clearance"));
}

TEST_CASE("layer CSV has the documented columns") {
  std::ostringstream os;
  write_layers_csv(os, small_unit_ball(2));
  const auto text = os.str();
  CHECK(text.rfind("layer,R,rho,r,count,capacity_sum,weighted_sum,kappa_low,kappa,kappa_high,"
                   "samples,epsilon,log_inv_r\n",
                   0) == 0);
  int lines = 0;
  for (char ch : text) lines += ch == '\n';
  CHECK(lines == 3);
}

TEST_CASE("render is deterministic vector output") {
  const auto cfg = small_unit_ball(2);
  const auto a = render_svg(cfg);
  CHECK(a == render_svg(cfg));
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("<circle") != std::string::npos);
  const auto s3 = render_svg(small_unit_ball(3));
  CHECK(s3.find("<svg") != std::string::npos);
}
