#include "champagne/render.hpp"

#include <cmath>
#include <sstream>

#include "champagne/error.hpp"
#include "champagne/format.hpp"

namespace champagne {

namespace {

class Svg {
 public:
  Svg(const Vec& lo, const Vec& hi, int width) : lo_(lo), hi_(hi) {
    const double w = hi[0] - lo[0], h = hi[1] - lo[1];
    scale_ = width / w;
    height_ = static_cast<int>(std::ceil(h * scale_));
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
         << height_ << "\" viewBox=\"0 0 " << width << ' ' << height_ << "\">\n";
    out_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& style) {
    out_ << "<circle cx=\"" << fmt(x(cx)) << "\" cy=\"" << fmt(y(cy)) << "\" r=\"" << fmt(r * scale_)
         << "\" " << style << "/>\n";
  }
  void rect(double x0, double y0, double x1, double y1, const std::string& style) {
    out_ << "<rect x=\"" << fmt(x(x0)) << "\" y=\"" << fmt(y(y1)) << "\" width=\""
         << fmt((x1 - x0) * scale_) << "\" height=\"" << fmt((y1 - y0) * scale_) << "\" " << style
         << "/>\n";
  }
  void comment(const std::string& text) { out_ << "<!-- " << text << " -->\n"; }
  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  static std::string fmt(double v) { return shortest(std::round(v * 1e4) / 1e4); }
  double x(double v) const { return (v - lo_[0]) * scale_; }
  double y(double v) const { return (hi_[1] - v) * scale_; }

  Vec lo_, hi_;
  double scale_ = 1.0;
  int height_ = 0;
  std::ostringstream out_;
};

// Cross-section of a domain with the plane x_3 = 0 (identity for d = 2).
void draw_domain(Svg& svg, const Domain& dom, const std::string& style) {
  switch (dom.kind()) {
    case Domain::Kind::Ball: {
      const double z = dom.d() >= 3 ? dom.center()[2] : 0.0;
      if (std::abs(z) < dom.radius()) {
        svg.circle(dom.center()[0], dom.center()[1], std::sqrt(dom.radius() * dom.radius() - z * z), style);
      }
      break;
    }
    case Domain::Kind::Box:
      if (dom.d() < 3 || (dom.lo()[2] < 0.0 && dom.hi()[2] > 0.0)) {
        svg.rect(dom.lo()[0], dom.lo()[1], dom.hi()[0], dom.hi()[1], style);
      }
      break;
    default:
      for (const auto& c : dom.children()) draw_domain(svg, c, style);
  }
}

void draw_bubble(Svg& svg, const Vec& c, double r, int d, const std::string& style) {
  const double z = d >= 3 ? c[2] : 0.0;
  if (std::abs(z) >= r) return;
  svg.circle(c[0], c[1], std::sqrt(r * r - z * z), style);
}

}  // namespace

std::string render_svg(const ChampagneConfig& cfg, const RenderOptions& opt) {
  if (cfg.d > 3) throw DomainError("render: only d = 2 and d = 3 are supported");
  auto [lo, hi] = cfg.domain.bounding_box();
  const double pad = 0.05 * std::max(hi[0] - lo[0], hi[1] - lo[1]);
  lo[0] -= pad;
  lo[1] -= pad;
  hi[0] += pad;
  hi[1] += pad;
  Svg svg(lo, hi, opt.width);
  svg.comment("builder " + cfg.builder + ", d = " + std::to_string(cfg.d) +
              (cfg.d == 3 ? ", section x3 = 0" : ""));
  draw_domain(svg, cfg.domain, "fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"");
  if (opt.exhaustion && cfg.exhaustion) {
    for (const auto& v : cfg.exhaustion->levels) {
      draw_domain(svg, v, "fill=\"none\" stroke=\"#888\" stroke-width=\"0.6\" stroke-dasharray=\"4 3\"");
    }
  }

  double drawn = static_cast<double>(cfg.loose.size());
  for (const auto& p : cfg.placements) {
    for (const auto& L : cfg.stacks[static_cast<std::size_t>(p.stack)].layers) {
      drawn += L.materialized() ? L.count : 0.0;
    }
  }
  const bool individual = drawn <= static_cast<double>(opt.max_bubbles);
  const std::string bubble_style = "fill=\"#1f77b4\" stroke=\"none\"";
  const std::string ring_style = "fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.5\"";
  for (const auto& p : cfg.placements) {
    for (const auto& L : cfg.stacks[static_cast<std::size_t>(p.stack)].layers) {
      const double s = std::exp(-(L.depth - std::log(p.scale)));
      if (L.materialized() && individual) {
        for (const auto& u : L.grid->points()) draw_bubble(svg, p.center + p.scale * u, s, cfg.d, bubble_style);
      } else {
        const double z = cfg.d >= 3 ? p.center[2] : 0.0;
        const double R = p.scale * L.R;
        if (std::abs(z) < R) svg.circle(p.center[0], p.center[1], std::sqrt(R * R - z * z), ring_style);
      }
    }
  }
  for (const auto& b : cfg.loose) draw_bubble(svg, b.center, b.radius, cfg.d, bubble_style);
  return svg.finish();
}

}  // namespace champagne
