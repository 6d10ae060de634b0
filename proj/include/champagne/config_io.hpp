#pragma once

// JSON persistence of configurations and CSV verifier reports.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "champagne/builder.hpp"
#include "champagne/verifier.hpp"

namespace champagne {

inline constexpr int kConfigVersion = 1;

nlohmann::json domain_to_json(const Domain& dom);
Domain domain_from_json(const nlohmann::json& j);

nlohmann::json gauge_to_json(const Gauge& g);
Gauge gauge_from_json(const nlohmann::json& j);
/// Whitespace-separated "t h" pairs, one per line; '#' starts a comment.
Gauge load_gauge_table(const std::string& path);

nlohmann::json config_to_json(const ChampagneConfig& cfg);
/// Rebuilds point indices; throws InvariantViolation on malformed input.
ChampagneConfig config_from_json(const nlohmann::json& j);

/// Compact text with shortest round-trip doubles.
std::string dump_config(const ChampagneConfig& cfg);
void save_config(const ChampagneConfig& cfg, const std::string& path);
ChampagneConfig load_config(const std::string& path);

/// Columns: layer,R,rho,r,count,capacity_sum,weighted_sum,kappa_low,kappa,
/// kappa_high,samples,epsilon,log_inv_r.
void write_report_csv(std::ostream& os, const UnavoidabilityReport& rep, double epsilon);
/// Layer rows without kappa columns filled (for build summaries).
void write_layers_csv(std::ostream& os, const ChampagneConfig& cfg);
nlohmann::json report_summary(const UnavoidabilityReport& rep);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace champagne
