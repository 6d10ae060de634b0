#include "champagne/config_io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "champagne/error.hpp"
#include "champagne/format.hpp"

namespace champagne {

using nlohmann::json;

namespace {

json vec_to_json(const Vec& v, int d) {
  json a = json::array();
  for (int i = 0; i < d; ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& a, int d) {
  if (!a.is_array() || static_cast<int>(a.size()) != d) {
    throw InvariantViolation("config: vector of wrong dimension");
  }
  Vec v;
  for (int i = 0; i < d; ++i) v[i] = a[static_cast<std::size_t>(i)].get<double>();
  return v;
}

json layer_to_json(const SphereLayer& L, int d) {
  json j;
  j["index"] = L.index;
  j["R"] = L.R;
  j["rho"] = L.rho;
  j["log_inv_r"] = L.depth;
  j["beta"] = L.beta;
  j["count"] = L.count;
  j["count_exact"] = L.count_exact;
  j["seed"] = L.seed;
  j["capacity_sum"] = L.capacity_sum;
  j["weighted_sum"] = L.weighted_sum;
  if (L.materialized()) {
    j["covering_radius"] = L.covering_radius;
    j["min_separation"] = L.min_separation;
    json pts = json::array();
    for (const auto& p : L.grid->points()) pts.push_back(vec_to_json(p, d));
    j["points"] = std::move(pts);
  }
  return j;
}

SphereLayer layer_from_json(const json& j, int d) {
  SphereLayer L;
  L.index = j.at("index").get<int>();
  L.R = j.at("R").get<double>();
  L.rho = j.at("rho").get<double>();
  L.depth = j.at("log_inv_r").get<double>();
  L.beta = j.at("beta").get<double>();
  L.count = j.at("count").get<double>();
  L.count_exact = j.at("count_exact").get<bool>();
  L.seed = j.at("seed").get<std::uint64_t>();
  L.capacity_sum = j.at("capacity_sum").get<double>();
  L.weighted_sum = j.at("weighted_sum").get<double>();
  if (j.contains("points")) {
    L.covering_radius = j.at("covering_radius").get<double>();
    L.min_separation = j.at("min_separation").get<double>();
    std::vector<Vec> pts;
    for (const auto& p : j.at("points")) pts.push_back(vec_from_json(p, d));
    if (!(L.beta > 0.0)) throw InvariantViolation("config: layer beta must be positive");
    L.grid = std::make_shared<PointGrid>(d, L.beta, pts);
  }
  return L;
}

}  // namespace

json domain_to_json(const Domain& dom) {
  json j;
  const int d = dom.d();
  switch (dom.kind()) {
    case Domain::Kind::Ball:
      j["kind"] = "ball";
      j["center"] = vec_to_json(dom.center(), d);
      j["radius"] = dom.radius();
      break;
    case Domain::Kind::Box:
      j["kind"] = "box";
      j["lo"] = vec_to_json(dom.lo(), d);
      j["hi"] = vec_to_json(dom.hi(), d);
      break;
    case Domain::Kind::Union:
    case Domain::Kind::Intersection: {
      j["kind"] = dom.kind() == Domain::Kind::Union ? "union" : "intersection";
      json parts = json::array();
      for (const auto& c : dom.children()) parts.push_back(domain_to_json(c));
      j["parts"] = std::move(parts);
      break;
    }
  }
  j["d"] = d;
  return j;
}

Domain domain_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int d = j.at("d").get<int>();
  if (kind == "ball") return Domain::ball(vec_from_json(j.at("center"), d), j.at("radius").get<double>(), d);
  if (kind == "box") return Domain::box(vec_from_json(j.at("lo"), d), vec_from_json(j.at("hi"), d), d);
  std::vector<Domain> parts;
  for (const auto& p : j.at("parts")) parts.push_back(domain_from_json(p));
  if (kind == "union") return Domain::unite(std::move(parts));
  if (kind == "intersection") return Domain::intersect(std::move(parts));
  throw InvariantViolation("config: unknown domain kind '" + kind + "'");
}

json gauge_to_json(const Gauge& g) {
  json j;
  switch (g.kind()) {
    case Gauge::Kind::Tabulated:
      j["kind"] = "tabulated";
      j["t"] = g.table_t();
      j["h"] = g.table_h();
      break;
    case Gauge::Kind::Custom:
      throw InvariantViolation("config: custom gauges cannot be serialized");
    default:
      j["kind"] = "preset";
      j["spec"] = g.spec();
  }
  return j;
}

Gauge gauge_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "preset") return Gauge::parse(j.at("spec").get<std::string>());
  if (kind == "tabulated") {
    return Gauge::tabulated(j.at("t").get<std::vector<double>>(), j.at("h").get<std::vector<double>>());
  }
  throw InvariantViolation("config: unknown gauge kind '" + kind + "'");
}

Gauge load_gauge_table(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<double> t, h;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    double a = 0.0, b = 0.0;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) throw DomainError("gauge table: expected 't h' pairs in " + path);
    t.push_back(a);
    h.push_back(b);
  }
  return Gauge::tabulated(std::move(t), std::move(h));
}

json config_to_json(const ChampagneConfig& cfg) {
  json j;
  j["version"] = kConfigVersion;
  j["d"] = cfg.d;
  j["domain"] = domain_to_json(cfg.domain);
  j["gauge"] = gauge_to_json(cfg.gauge);
  j["delta"] = cfg.delta;
  j["clearance_factor"] = cfg.clearance_factor;

  json stacks = json::array();
  for (const auto& s : cfg.stacks) {
    json layers = json::array();
    for (const auto& L : s.layers) layers.push_back(layer_to_json(L, cfg.d));
    stacks.push_back(json{{"layers", std::move(layers)}});
  }
  j["stacks"] = std::move(stacks);

  json placements = json::array();
  for (const auto& p : cfg.placements) {
    placements.push_back(json{{"stack", p.stack},
                              {"center", vec_to_json(p.center, cfg.d)},
                              {"scale", p.scale},
                              {"level", p.level},
                              {"budget", p.budget},
                              {"weighted_sum", p.weighted_sum}});
  }
  j["placements"] = std::move(placements);

  json bubbles = json::array();
  for (const auto& b : cfg.loose) {
    bubbles.push_back(json{{"center", vec_to_json(b.center, cfg.d)}, {"radius", b.radius}, {"layer_id", b.layer_id}});
  }
  j["bubbles"] = std::move(bubbles);

  if (cfg.exhaustion) {
    json levels = json::array();
    for (const auto& v : cfg.exhaustion->levels) levels.push_back(domain_to_json(v));
    j["exhaustion"] = json{{"levels", std::move(levels)},
                           {"offsets", cfg.exhaustion->offsets},
                           {"gaps", cfg.exhaustion->gaps}};
  }
  j["totals"] = json{{"weighted_sum", cfg.total_weighted_sum}, {"bubble_count", cfg.bubble_count()}};
  j["metadata"] = json{{"builder", cfg.builder}, {"seed", cfg.seed}, {"params", cfg.params}};
  return j;
}

ChampagneConfig config_from_json(const json& j) {
  try {
    if (j.at("version").get<int>() != kConfigVersion) {
      throw InvariantViolation("config: unsupported version");
    }
    ChampagneConfig cfg;
    cfg.d = j.at("d").get<int>();
    if (cfg.d < 2 || cfg.d > kMaxDim) throw InvariantViolation("config: unsupported dimension");
    cfg.domain = domain_from_json(j.at("domain"));
    cfg.gauge = gauge_from_json(j.at("gauge"));
    cfg.delta = j.at("delta").get<double>();
    cfg.clearance_factor = j.at("clearance_factor").get<double>();
    for (const auto& s : j.at("stacks")) {
      LayerStack stack;
      for (const auto& L : s.at("layers")) stack.layers.push_back(layer_from_json(L, cfg.d));
      cfg.stacks.push_back(std::move(stack));
    }
    for (const auto& p : j.at("placements")) {
      Placement pl;
      pl.stack = p.at("stack").get<int>();
      if (pl.stack < 0 || pl.stack >= static_cast<int>(cfg.stacks.size())) {
        throw InvariantViolation("config: placement refers to a missing stack");
      }
      pl.center = vec_from_json(p.at("center"), cfg.d);
      pl.scale = p.at("scale").get<double>();
      pl.level = p.at("level").get<int>();
      pl.budget = p.at("budget").get<double>();
      pl.weighted_sum = p.at("weighted_sum").get<double>();
      cfg.placements.push_back(pl);
    }
    for (const auto& b : j.at("bubbles")) {
      cfg.loose.push_back(Bubble{vec_from_json(b.at("center"), cfg.d), b.at("radius").get<double>(),
                                 b.at("layer_id").get<int>()});
    }
    if (j.contains("exhaustion")) {
      Exhaustion ex;
      for (const auto& v : j["exhaustion"].at("levels")) ex.levels.push_back(domain_from_json(v));
      ex.offsets = j["exhaustion"].at("offsets").get<std::vector<double>>();
      ex.gaps = j["exhaustion"].at("gaps").get<std::vector<double>>();
      cfg.exhaustion = std::move(ex);
    }
    cfg.total_weighted_sum = j.at("totals").at("weighted_sum").get<double>();
    const auto& meta = j.at("metadata");
    cfg.builder = meta.at("builder").get<std::string>();
    cfg.seed = meta.at("seed").get<std::uint64_t>();
    cfg.params = meta.at("params").get<std::map<std::string, std::string>>();
    return cfg;
  } catch (const json::exception& e) {
    throw InvariantViolation(std::string("config: malformed file: ") + e.what());
  }
}

std::string dump_config(const ChampagneConfig& cfg) { return config_to_json(cfg).dump() + "\n"; }

void save_config(const ChampagneConfig& cfg, const std::string& path) {
  write_text_file(path, dump_config(cfg));
}

ChampagneConfig load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw InvariantViolation("config: cannot parse " + path + ": " + e.what());
  }
  return config_from_json(j);
}

void write_report_csv(std::ostream& os, const UnavoidabilityReport& rep, double epsilon) {
  os << "layer,R,rho,r,count,capacity_sum,weighted_sum,kappa_low,kappa,kappa_high,samples,epsilon,log_inv_r\n";
  for (const auto& row : rep.rows) {
    os << row.layer << ',' << shortest(row.R) << ',' << shortest(row.rho) << ',' << shortest(row.r)
       << ',' << shortest(row.count) << ',' << shortest(row.capacity_sum) << ','
       << shortest(row.weighted_sum) << ',' << shortest(row.kappa.kappa_low) << ','
       << shortest(row.kappa.kappa) << ',' << shortest(row.kappa.kappa_high) << ','
       << row.kappa.samples() << ',' << shortest(epsilon) << ',' << shortest(-std::log(row.r))
       << '\n';
  }
}

void write_layers_csv(std::ostream& os, const ChampagneConfig& cfg) {
  os << "layer,R,rho,r,count,capacity_sum,weighted_sum,kappa_low,kappa,kappa_high,samples,epsilon,log_inv_r\n";
  for (std::size_t s = 0; s < cfg.stacks.size(); ++s) {
    for (const auto& L : cfg.stacks[s].layers) {
      os << L.index << ',' << shortest(L.R) << ',' << shortest(L.rho) << ',' << shortest(L.r()) << ','
         << shortest(L.count) << ',' << shortest(L.capacity_sum) << ',' << shortest(L.weighted_sum)
         << ",,,,0,," << shortest(L.depth) << '\n';
    }
  }
}

json report_summary(const UnavoidabilityReport& rep) {
  json j;
  j["ladder_bound"] = rep.ladder;
  j["ladder_sigma"] = rep.ladder_sigma;
  j["direct"] = json{{"p_hat", rep.direct.p_hat},
                     {"ci_low", rep.direct.ci_low},
                     {"ci_high", rep.direct.ci_high},
                     {"samples", rep.direct.n_samples},
                     {"epsilon", rep.direct.epsilon},
                     {"mean_steps", rep.direct.mean_steps},
                     {"seed", rep.direct.seed}};
  j["margin"] = rep.margin;
  j["consistent"] = rep.consistent;
  return j;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
}

}  // namespace champagne
