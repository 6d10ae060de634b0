#pragma once

#include <string>

#include "champagne/builder.hpp"

namespace champagne {

struct RenderOptions {
  int width = 800;
  /// Above this many drawn bubbles, layers are drawn as their carrier spheres.
  std::size_t max_bubbles = 200000;
  bool exhaustion = true;
};

/// Deterministic SVG: domain outline, exhaustion surfaces, bubbles to scale.
/// d = 2 shows the plane; d = 3 the cross-section x_3 = 0.
std::string render_svg(const ChampagneConfig& cfg, const RenderOptions& opt = {});

}  // namespace champagne
