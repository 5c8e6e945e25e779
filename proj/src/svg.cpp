#include <algorithm>
#include <cstdio>
#include <string>

#include "fso/embedding.hpp"

namespace fso {

namespace {

template <class... Args>
void append(std::string& out, const char* fmt, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  out += buf;
}

}  // namespace

std::string render_svg(const SonLattice& lattice, const Embedding& e, const RenderOptions& opt) {
  const auto [xmin, xmax] = std::minmax_element(e.xs.begin(), e.xs.end());
  const auto [ymin, ymax] = std::minmax_element(e.ys.begin(), e.ys.end());
  const double span = std::max({*xmax - *xmin, *ymax - *ymin, 1e-12});
  const double usable = opt.canvas - 2.0 * opt.margin;
  const double k = usable / span;
  // Centre the drawing; SVG y grows downwards.
  const double ox = opt.margin + (usable - (*xmax - *xmin) * k) / 2.0;
  const double oy = opt.margin + (usable - (*ymax - *ymin) * k) / 2.0;
  auto px = [&](NodeId v) { return ox + (e.xs[v] - *xmin) * k; };
  auto py = [&](NodeId v) { return opt.canvas - (oy + (e.ys[v] - *ymin) * k); };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  append(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
         opt.canvas, opt.canvas, opt.canvas, opt.canvas);
  out += "<title>SON space of seed " + lattice.seed().canonical_text() + "</title>\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (opt.draw_edges) {
    out += "<g stroke=\"#9aa5b1\" stroke-width=\"0.5\">\n";
    for (const auto& [u, v] : lattice.edges()) {
      append(out, "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/>\n", px(u), py(u), px(v), py(v));
    }
    out += "</g>\n";
  }

  out += "<g fill=\"#1f2933\">\n";
  for (NodeId v = 0; v < lattice.size(); ++v) {
    append(out, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\"/>\n", px(v), py(v), opt.marker_radius);
  }
  out += "</g>\n";

  if (!opt.highlight.empty()) {
    out += "<g fill=\"#d64545\">\n";
    for (NodeId v : opt.highlight) {
      append(out, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\"/>\n", px(v), py(v), opt.marker_radius * 1.5);
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace fso
