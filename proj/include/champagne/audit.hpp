#pragma once

// Independent re-check of a configuration: layer relations, clearance,
// disjointness and budgets, recomputed from the stored geometry.

#include <string>
#include <vector>

#include "champagne/builder.hpp"

namespace champagne {

struct AuditIssue {
  std::string check;
  std::string detail;
};

struct AuditOptions {
  int covering_samples = 10000;
  /// Run the O(n^2) pairwise check as well when at most this many bubbles are materialized.
  std::size_t brute_force_limit = 0;
  double rel_tol = 1e-12;
};

struct AuditReport {
  std::vector<AuditIssue> issues;
  std::vector<std::string> passed;
  double recomputed_total = 0.0;
  double bubble_count = 0.0;
  std::size_t materialized_bubbles = 0;
  bool ok() const { return issues.empty(); }
};

/// Sum of phi(r_x) h(r_x) over every bubble, from layers and loose bubbles.
double recompute_weighted_sum(const ChampagneConfig& cfg);

AuditReport audit_config(const ChampagneConfig& cfg, const AuditOptions& opt = {});

}  // namespace champagne
