#include "orbitred/svg.hpp"

#include <cstdio>
#include <fstream>

namespace orbitred {

namespace {

constexpr double kCanvas = 800;
constexpr double kMargin = 10;
const char* const kStrokes[] = {"#1f3b73", "#c0392b", "#16a085", "#8e44ad"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string exact(const RVec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) s += ' ';
    s += to_string(v[i]);
  }
  return s;
}

struct Frame {
  Window w;
  double scale = 1;
  double x(const Rational& v) const { return kMargin + Rational(v - w.lo[0]).get_d() * scale; }
  double y(const Rational& v) const { return kMargin + Rational(w.hi[1] - v).get_d() * scale; }
};

void require_2d(const Window& w) {
  if (w.dim() != 2) fail(ErrorCode::UnsupportedDimension, "SVG output needs a 2-D window, got " + std::to_string(w.dim()));
}

}  // namespace

std::string svg_document(const Window& window, const std::vector<RegionPartition>& layers,
                         const std::optional<MarkerSet>& markers) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"";
  if (window.dim() == 0) {
    out += " width=\"" + num(kCanvas) + "\" height=\"" + num(kCanvas) + "\">\n</svg>\n";
    return out;
  }
  require_2d(window);
  Frame f{window, 1};
  Rational longest = std::max(window.edge(0), window.edge(1));
  f.scale = kCanvas / longest.get_d();
  double width = window.edge(0).get_d() * f.scale + 2 * kMargin;
  double height = window.edge(1).get_d() * f.scale + 2 * kMargin;
  out += " width=\"" + num(width) + "\" height=\"" + num(height) + "\" data-scale=\"" + num(f.scale) +
         "\" data-window-lo=\"" + exact(window.lo) + "\" data-window-hi=\"" + exact(window.hi) + "\">\n";
  out += "<rect x=\"" + num(f.x(window.lo[0])) + "\" y=\"" + num(f.y(window.hi[1])) + "\" width=\"" +
         num(window.edge(0).get_d() * f.scale) + "\" height=\"" + num(window.edge(1).get_d() * f.scale) +
         "\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& p = layers[l];
    if (p.window.dim() != 0) require_2d(p.window);
    const char* stroke = kStrokes[l % 4];
    double sw = l == 0 ? 1.0 : 0.75;
    out += "<g class=\"layer\" data-layer=\"" + std::to_string(l) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
           num(sw) + "\" fill=\"none\">\n";
    for (std::size_t k = 0; k < p.rects.size(); ++k) {
      const Rect& r = p.rects[k];
      double x0 = f.x(r.lo[0]), x1 = f.x(r.hi[0]), y0 = f.y(r.lo[1]), y1 = f.y(r.hi[1]);
      out += "<rect class=\"region\" data-region=\"" + std::to_string(p.region[k]) + "\" data-lo=\"" + exact(r.lo) +
             "\" data-hi=\"" + exact(r.hi) + "\" x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" +
             num(x1 - x0) + "\" height=\"" + num(y0 - y1) + "\" stroke=\"none\"/>\n";
      out += "<path class=\"closed\" d=\"M" + num(x0) + " " + num(y1) + "L" + num(x0) + " " + num(y0) + "L" +
             num(x1) + " " + num(y0) + "\"/>\n";
      out += "<path class=\"open\" stroke-dasharray=\"3,2\" d=\"M" + num(x0) + " " + num(y1) + "L" + num(x1) + " " +
             num(y1) + "L" + num(x1) + " " + num(y0) + "\"/>\n";
    }
    out += "</g>\n";
  }
  if (markers) {
    out += "<g class=\"markers\" fill=\"#000000\">\n";
    for (const auto& m : markers->points)
      out += "<circle cx=\"" + num(f.x(m[0])) + "\" cy=\"" + num(f.y(m[1])) + "\" r=\"2\" data-at=\"" + exact(m) +
             "\"/>\n";
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string svg_partition(const RegionPartition& p) { return svg_document(p.window, {p}); }

void render_svg(const RegionPartition& p, const std::string& path) { write_text_file(path, svg_partition(p)); }

void render_svg_overlay(const RegionPartition& base, const RegionPartition& top, const std::string& path) {
  write_text_file(path, svg_document(base.window, {base, top}));
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::PreconditionViolated, "cannot write " + path);
  f << text;
  if (!f) fail(ErrorCode::PreconditionViolated, "write failed for " + path);
}

}  // namespace orbitred
