// champagne: build, verify, audit and render champagne configurations.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "champagne/audit.hpp"
#include "champagne/builder.hpp"
#include "champagne/config_io.hpp"
#include "champagne/error.hpp"
#include "champagne/format.hpp"
#include "champagne/gauge.hpp"
#include "champagne/render.hpp"
#include "champagne/rng.hpp"
#include "champagne/verifier.hpp"
#include "manifest.hpp"

using namespace champagne;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kInvalidFlags = 2, kInvariant = 3, kInfeasible = 4, kVerification = 5 };

std::vector<std::string> g_args;

Vec parse_point(const std::string& text, int d) {
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      xs.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw DomainError("bad coordinate '" + item + "'");
    }
  }
  if (static_cast<int>(xs.size()) != d) {
    throw DomainError("point '" + text + "' needs " + std::to_string(d) + " coordinates");
  }
  Vec v;
  for (int i = 0; i < d; ++i) v[i] = xs[static_cast<std::size_t>(i)];
  return v;
}

std::vector<double> parse_list(const std::string& text, std::size_t n) {
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) xs.push_back(std::stod(item));
  if (xs.size() != n) throw DomainError("expected " + std::to_string(n) + " comma-separated values");
  return xs;
}

Gauge make_gauge(const std::string& spec, std::vector<std::string>& inputs) {
  if (spec.rfind("file:", 0) == 0) {
    inputs.push_back(spec.substr(5));
    return load_gauge_table(spec.substr(5));
  }
  return Gauge::parse(spec);
}

Domain make_domain(const std::string& name, int d) {
  if (name == "ball") return Domain::ball(Vec{}, 1.0, d);
  if (name == "box") {
    Vec hi;
    for (int i = 0; i < d; ++i) hi[i] = 1.0;
    hi[0] = 2.0;
    return Domain::box(Vec{}, hi, d);
  }
  if (name == "lshape") {
    if (d != 2) throw DomainError("lshape is planar; use --dim 2");
    return Domain::lshape(1.0);
  }
  throw DomainError("unknown domain '" + name + "'");
}

void finish_build(const ChampagneConfig& cfg, const std::string& out, const std::string& command,
                  const std::vector<std::string>& inputs, const json& params) {
  save_config(cfg, out);
  tools::Manifest m{command, g_args, inputs, {out}, params};
  tools::write_manifest(m);
  std::cout << "config " << out << "\n"
            << "builder " << cfg.builder << "\n"
            << "d " << cfg.d << "\n"
            << "placements " << cfg.placements.size() << "\n"
            << "bubbles " << shortest(cfg.bubble_count()) << "\n"
            << "weighted_sum " << shortest(cfg.total_weighted_sum) << "\n";
  if (cfg.delta > 0.0) std::cout << "delta " << shortest(cfg.delta) << "\n";
  for (const auto& [k, v] : cfg.params) std::cout << k << ' ' << v << "\n";
}

double auto_epsilon(const ChampagneConfig& cfg, int max_layer) {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& p : cfg.placements) {
    for (const auto& L : cfg.stacks[static_cast<std::size_t>(p.stack)].layers) {
      if (L.index <= max_layer) r = std::min(r, std::exp(-(L.depth - std::log(p.scale))));
    }
  }
  for (const auto& b : cfg.loose) r = std::min(r, b.radius);
  return std::isfinite(r) ? 1e-3 * r : 1e-4;
}

int max_layer_index(const ChampagneConfig& cfg) {
  int k = 0;
  for (const auto& s : cfg.stacks) {
    for (const auto& L : s.layers) k = std::max(k, L.index);
  }
  return k;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) g_args.emplace_back(argv[i]);

  CLI::App app{"Champagne subdomain constructions and walk-on-spheres verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tools::kToolVersion);

  // build-unit-ball
  auto* ub = app.add_subcommand("build-unit-ball", "Layered bubbles in B(0,1) within a capacity budget");
  int ub_dim = 2, ub_layers = 8;
  double ub_delta = 1e-3, ub_max_points = 2e6;
  std::string ub_gauge = "phi-eps:0.5", ub_rule = "geometric", ub_out = "config.json";
  std::uint64_t ub_seed = 1;
  ub->add_option("-d,--dim", ub_dim, "Dimension")->check(CLI::Range(2, kMaxDim));
  ub->add_option("--delta", ub_delta, "Budget for sum phi(r) h(r)")->check(CLI::PositiveNumber);
  ub->add_option("--gauge", ub_gauge, "phi-eps:<e> | loglog | power:<a> | file:<path>");
  ub->add_option("--layers", ub_layers, "Number of layers K")->check(CLI::Range(1, 200));
  ub->add_option("--radii-rule", ub_rule, "geometric | log2-tail (alias paper-log2)")
      ->check(CLI::IsMember({"geometric", "log2-tail", "paper-log2"}));
  ub->add_option("--seed", ub_seed, "RNG seed");
  ub->add_option("--max-points", ub_max_points, "Largest layer kept as explicit points");
  ub->add_option("--out", ub_out, "Config file");

  // build-one-bubble
  auto* ob = app.add_subcommand("build-one-bubble", "Sequence R_k = 1 - sum (j log^2 j)^{-1}");
  int ob_dim = 2, ob_kmin = 0, ob_layers = 5;
  double ob_eps = 1.0;
  std::string ob_out = "config.json";
  std::uint64_t ob_seed = 1;
  ob->add_option("-d,--dim", ob_dim, "Dimension")->check(CLI::Range(2, kMaxDim));
  ob->add_option("--k-min", ob_kmin, "First k (0: smallest admissible)");
  ob->add_option("--layers", ob_layers, "Number of layers")->check(CLI::Range(1, 10000));
  ob->add_option("--eps", ob_eps, "Exponent in sum phi(r)^{1+eps}")->check(CLI::NonNegativeNumber);
  ob->add_option("--seed", ob_seed, "RNG seed");
  ob->add_option("--out", ob_out, "Config file");

  // build-general
  auto* gb = app.add_subcommand("build-general", "Annulus fillers along an exhaustion of a domain");
  int gb_dim = 2, gb_levels = 4, gb_probes = 8, gb_ref_layers = 3, gb_max_layers = 64;
  double gb_delta = 1e-2, gb_kappa = 0.0, gb_first = 0.25, gb_ratio = 0.5;
  std::uint64_t gb_samples = 4000, gb_seed = 1;
  std::string gb_domain = "lshape", gb_gauge = "power:2", gb_out = "config.json";
  gb->add_option("--domain", gb_domain, "ball | box | lshape")->check(CLI::IsMember({"ball", "box", "lshape"}));
  gb->add_option("-d,--dim", gb_dim, "Dimension")->check(CLI::Range(2, kMaxDim));
  gb->add_option("--levels", gb_levels, "Exhaustion levels N")->check(CLI::Range(1, 64));
  gb->add_option("--first-offset", gb_first, "Inward offset of V_1")->check(CLI::PositiveNumber);
  gb->add_option("--ratio", gb_ratio, "Offset ratio between levels")->check(CLI::Range(0.0, 1.0));
  gb->add_option("--delta", gb_delta, "Budget")->check(CLI::PositiveNumber);
  gb->add_option("--gauge", gb_gauge, "phi-eps:<e> | loglog | power:<a> | file:<path>");
  gb->add_option("--kappa", gb_kappa, "Per-layer kappa (0: measure on a reference stack)")
      ->check(CLI::Range(0.0, 1.0));
  gb->add_option("--probes", gb_probes, "Probe points per reference layer")->check(CLI::PositiveNumber);
  gb->add_option("--samples", gb_samples, "Walks per probe")->check(CLI::PositiveNumber);
  gb->add_option("--ref-layers", gb_ref_layers, "Layers in the reference stack")->check(CLI::Range(1, 16));
  gb->add_option("--max-layers", gb_max_layers, "Cap on layers per annulus")->check(CLI::PositiveNumber);
  gb->add_option("--seed", gb_seed, "RNG seed");
  gb->add_option("--out", gb_out, "Config file");

  // verify
  auto* vf = app.add_subcommand("verify", "Walk-on-spheres report for a config");
  std::string vf_config, vf_out = "report.csv";
  std::vector<std::string> vf_starts;
  int vf_layers = 0, vf_probes = 16;
  std::uint64_t vf_samples = 20000, vf_direct = 100000, vf_seed = 1;
  double vf_eps = 0.0, vf_min_hit = -1.0;
  vf->add_option("--config", vf_config, "Config file")->required()->check(CLI::ExistingFile);
  vf->add_option("--layers", vf_layers, "Use layers 1..K (0: all)")->check(CLI::NonNegativeNumber);
  vf->add_option("--probes", vf_probes, "Probe points per layer")->check(CLI::PositiveNumber);
  vf->add_option("--samples", vf_samples, "Walks per probe")->check(CLI::PositiveNumber);
  vf->add_option("--direct-samples", vf_direct, "Walks per start point")->check(CLI::PositiveNumber);
  vf->add_option("--epsilon", vf_eps, "Stopping tolerance (0: 1e-3 times the smallest radius)");
  vf->add_option("--start", vf_starts, "Start point x,y[,z] (repeatable; default origin)");
  vf->add_option("--min-hit", vf_min_hit, "Fail unless every direct estimate reaches this value");
  vf->add_option("--seed", vf_seed, "RNG seed");
  vf->add_option("--out", vf_out, "Report CSV (summary goes to <out>.json)");

  // audit
  auto* au = app.add_subcommand("audit", "Recheck every invariant of a config");
  std::string au_config;
  std::size_t au_brute = 20000;
  au->add_option("--config", au_config, "Config file")->required()->check(CLI::ExistingFile);
  au->add_option("--brute-force-limit", au_brute, "Pairwise check up to this many bubbles");

  // exact
  auto* ex = app.add_subcommand("exact", "Closed-form values");
  int ex_dim = 2;
  bool ex_eta = false;
  std::string ex_annulus, ex_potential;
  double ex_kernel = 0.0, ex_phi = 0.0;
  ex->add_option("-d,--dim", ex_dim, "Dimension")->check(CLI::Range(2, 64));
  ex->add_flag("--eta", ex_eta, "Hitting probability of B(0,1/7) from |z| = 1/2 in B(0,1)");
  ex->add_option("--annulus", ex_annulus, "s,z: hit B(0,s) from |z| = z before leaving B(0,1)");
  ex->add_option("--potential", ex_potential, "y,R,rho: G sigma at |y| = y");
  ex->add_option("--kernel", ex_kernel, "N(t)");
  ex->add_option("--phi", ex_phi, "phi(t)");

  // render
  auto* rd = app.add_subcommand("render", "SVG picture of a config");
  std::string rd_config, rd_out = "config.svg";
  int rd_width = 800;
  rd->add_option("--config", rd_config, "Config file")->required()->check(CLI::ExistingFile);
  rd->add_option("--out", rd_out, "SVG file");
  rd->add_option("--width", rd_width, "Width in pixels")->check(CLI::PositiveNumber);

  // replay
  auto* rp = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
  std::string rp_manifest;
  rp->add_option("--manifest", rp_manifest, "Manifest file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidFlags;
  }

  try {
    if (ub->parsed()) {
      std::vector<std::string> inputs;
      const GaugeSet gauges(ub_dim, make_gauge(ub_gauge, inputs));
      const auto radii = ub_rule == "geometric" ? radii_geometric(ub_layers)
                                                : radii_log2_tail(ub_layers, ub_dim);
      BuildOptions opt;
      opt.max_points = ub_max_points;
      auto cfg = build_unit_ball(gauges, ub_delta, radii, ub_seed, opt);
      cfg.params["radii_rule"] = ub_rule;
      cfg.seal();
      finish_build(cfg, ub_out, "build-unit-ball", inputs,
                   json{{"dim", ub_dim}, {"delta", ub_delta}, {"gauge", ub_gauge}, {"layers", ub_layers},
                        {"radii_rule", ub_rule}, {"seed", ub_seed}, {"max_points", ub_max_points}});
      return kOk;
    }

    if (ob->parsed()) {
      int k0 = ob_kmin;
      if (k0 == 0) {
        k0 = 2;
        while (!check_one_bubble_start(k0, ob_dim).ok) ++k0;
      }
      const auto cfg = build_one_bubble_sequence(k0, k0 + ob_layers - 1, ob_dim, ob_eps, ob_seed);
      finish_build(cfg, ob_out, "build-one-bubble", {},
                   json{{"dim", ob_dim}, {"k_min", k0}, {"layers", ob_layers}, {"eps", ob_eps}, {"seed", ob_seed}});
      return kOk;
    }

    if (gb->parsed()) {
      std::vector<std::string> inputs;
      const GaugeSet gauges(gb_dim, make_gauge(gb_gauge, inputs));
      const Domain domain = make_domain(gb_domain, gb_dim);
      const auto exh = make_exhaustion(domain, gb_levels, gb_first, gb_ratio);
      BuildOptions opt;
      opt.max_layers = gb_max_layers;
      double kappa = gb_kappa;
      std::string source = "given";
      if (kappa <= 0.0) {
        WosOptions w;
        w.epsilon = 0.0;
        w.samples = gb_samples;
        w.seed = mix64(gb_seed ^ 0x6b617070ULL);
        const auto ref = general_reference_kappa(exh, gauges, gb_delta, gb_ref_layers, gb_probes, w, gb_seed, opt);
        kappa = ref.kappa_low;
        source = "measured";
        if (!(kappa > 0.0)) {
          std::cerr << "build-general: measured kappa lower bound is 0; cannot size annuli\n";
          return kInfeasible;
        }
      }
      auto cfg = build_general(domain, exh, gauges, gb_delta, kappa, gb_seed, opt);
      cfg.params["kappa_source"] = source;
      cfg.params["domain"] = gb_domain;
      finish_build(cfg, gb_out, "build-general", inputs,
                   json{{"domain", gb_domain}, {"dim", gb_dim}, {"levels", gb_levels},
                        {"first_offset", gb_first}, {"ratio", gb_ratio}, {"delta", gb_delta},
                        {"gauge", gb_gauge}, {"kappa", kappa}, {"kappa_source", source},
                        {"probes", gb_probes}, {"samples", gb_samples}, {"seed", gb_seed}});
      return kOk;
    }

    if (vf->parsed()) {
      const auto cfg = load_config(vf_config);
      const int K = vf_layers > 0 ? vf_layers : max_layer_index(cfg);
      const double eps = vf_eps > 0.0 ? vf_eps : auto_epsilon(cfg, K);
      std::vector<Vec> starts;
      for (const auto& s : vf_starts) starts.push_back(parse_point(s, cfg.d));
      if (starts.empty()) starts.push_back(Vec{});

      WosOptions kopt;
      kopt.epsilon = eps;
      kopt.samples = vf_samples;
      kopt.seed = vf_seed;
      WosOptions dopt = kopt;
      dopt.samples = vf_direct;
      dopt.seed = mix64(vf_seed ^ 0xd1ec7ULL);

      json summary;
      bool ok = true;
      std::ofstream csv(vf_out);
      if (!csv) throw DomainError("cannot write " + vf_out);
      const bool layered = cfg.builder != "general" && cfg.placements.size() == 1;
      if (layered) {
        const auto rep = unavoidability_report(cfg, K, vf_probes, kopt, dopt, starts.front());
        write_report_csv(csv, rep, eps);
        summary = report_summary(rep);
        ok = rep.consistent;
        std::cout << "ladder_bound " << shortest(rep.ladder) << "\n";
      } else {
        csv << "layer,R,rho,r,count,capacity_sum,weighted_sum,kappa_low,kappa,kappa_high,samples,epsilon,log_inv_r\n";
      }
      const auto bubbles = cfg.bubble_set(K);
      json direct = json::array();
      for (std::size_t i = 0; i < starts.size(); ++i) {
        WosOptions o = dopt;
        o.seed = mix64(dopt.seed + i);
        const auto e = wos_hit_probability(cfg.domain, bubbles, starts[i], o);
        direct.push_back(json{{"start", std::vector<double>(starts[i].c.begin(), starts[i].c.begin() + cfg.d)},
                              {"p_hat", e.p_hat}, {"ci_low", e.ci_low}, {"ci_high", e.ci_high},
                              {"samples", e.n_samples}, {"mean_steps", e.mean_steps}});
        std::cout << "direct start " << i << " p_hat " << shortest(e.p_hat) << " ci [" << shortest(e.ci_low)
                  << ", " << shortest(e.ci_high) << "]\n";
        if (vf_min_hit >= 0.0 && e.p_hat < vf_min_hit) ok = false;
      }
      summary["starts"] = std::move(direct);
      summary["epsilon"] = eps;
      summary["layers"] = K;
      summary["pass"] = ok;
      csv.close();
      write_text_file(vf_out + ".json", summary.dump(2) + "\n");
      tools::Manifest m{"verify", g_args, {vf_config}, {vf_out, vf_out + ".json"},
                        json{{"layers", K}, {"probes", vf_probes}, {"samples", vf_samples},
                             {"direct_samples", vf_direct}, {"epsilon", eps}, {"seed", vf_seed}}};
      tools::write_manifest(m);
      std::cout << (ok ? "verify: PASS" : "verify: FAIL") << "\n";
      return ok ? kOk : kVerification;
    }

    if (au->parsed()) {
      const auto cfg = load_config(au_config);
      AuditOptions opt;
      opt.brute_force_limit = au_brute;
      const auto rep = audit_config(cfg, opt);
      for (const auto& c : rep.passed) std::cout << "PASS " << c << "\n";
      for (const auto& i : rep.issues) std::cout << "FAIL " << i.check << ": " << i.detail << "\n";
      std::cout << "bubbles " << shortest(rep.bubble_count) << "\n"
                << "weighted_sum " << shortest(rep.recomputed_total) << "\n";
      return rep.ok() ? kOk : kInvariant;
    }

    if (ex->parsed()) {
      std::cout.precision(17);
      bool any = false;
      if (ex_eta) {
        std::cout << "eta " << shortest(eta_exact(ex_dim)) << "\n";
        any = true;
      }
      if (!ex_annulus.empty()) {
        const auto v = parse_list(ex_annulus, 2);
        std::cout << "annulus_hit " << shortest(annulus_hit_exact(v[0], v[1], ex_dim)) << "\n";
        any = true;
      }
      if (!ex_potential.empty()) {
        const auto v = parse_list(ex_potential, 3);
        std::cout << "potential " << shortest(equilibrium_potential_sigma(v[0], v[1], v[2], ex_dim)) << "\n";
        any = true;
      }
      if (ex_kernel > 0.0) {
        std::cout << "N " << shortest(kernel_N(ex_kernel, ex_dim)) << "\n";
        any = true;
      }
      if (ex_phi > 0.0) {
        std::cout << "phi " << shortest(capacity_phi(ex_phi, ex_dim)) << "\n";
        any = true;
      }
      if (!any) {
        std::cerr << "exact: nothing requested (try --eta)\n";
        return kInvalidFlags;
      }
      return kOk;
    }

    if (rd->parsed()) {
      const auto cfg = load_config(rd_config);
      RenderOptions opt;
      opt.width = rd_width;
      write_text_file(rd_out, render_svg(cfg, opt));
      tools::Manifest m{"render", g_args, {rd_config}, {rd_out}, json{{"width", rd_width}}};
      tools::write_manifest(m);
      std::cout << "svg " << rd_out << "\n";
      return kOk;
    }

    if (rp->parsed()) {
      const auto exe = std::filesystem::canonical("/proc/self/exe").string();
      const auto bad = tools::replay_manifest(rp_manifest, exe);
      for (const auto& p : bad) std::cout << "MISMATCH " << p << "\n";
      std::cout << (bad.empty() ? "replay: identical" : "replay: outputs differ") << "\n";
      return bad.empty() ? kOk : kVerification;
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidFlags;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const BuildError& e) {
    std::cerr << "build infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
