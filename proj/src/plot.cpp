#include "seqrules/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "seqrules/error.hpp"
#include "seqrules/symbolizer.hpp"

namespace seqrules::plot {

namespace {

constexpr const char* kPalette[] = {"#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};
constexpr std::size_t kImageSide = 28;

const char* color(std::size_t pair) { return kPalette[pair % std::size(kPalette)]; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string sequence_svg(const HighlightPlot& p) {
  const double width = 800, height = 300, margin = 30, top = 40;
  const std::size_t n = p.values.size();
  const auto [lo_it, hi_it] = std::minmax_element(p.values.begin(), p.values.end());
  const double lo = *lo_it, hi = *hi_it == *lo_it ? *lo_it + 1.0 : *hi_it;
  const double step = n > 1 ? (width - 2 * margin) / static_cast<double>(n - 1) : 0.0;
  const auto x_of = [&](double t) { return margin + step * t; };
  const auto y_of = [&](double v) { return height - margin - (v - lo) / (hi - lo) * (height - margin - top); };

  std::string out;
  for (const auto& s : p.spans) {
    const double x0 = x_of(static_cast<double>(s.begin) - 0.5), x1 = x_of(static_cast<double>(s.end) - 0.5);
    out += "<rect x=\"" + num(std::max(margin, x0)) + "\" y=\"" + num(top) + "\" width=\"" +
           num(std::min(width - margin, x1) - std::max(margin, x0)) + "\" height=\"" + num(height - margin - top) +
           "\" fill=\"" + color(s.pair) + "\" fill-opacity=\"0.25\"/>\n";
  }
  out += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
  for (std::size_t t = 0; t < n; ++t) out += num(x_of(static_cast<double>(t))) + "," + num(y_of(p.values[t])) + " ";
  out += "\"/>\n";
  return out;
}

std::string image_svg(const HighlightPlot& p) {
  const double cell = 10, left = 30, top = 40;
  std::vector<int> owner(p.values.size(), -1);
  for (const auto& s : p.spans) {
    for (std::size_t t = s.begin; t < s.end && t < owner.size(); ++t) {
      if (owner[t] < 0) owner[t] = static_cast<int>(s.pair);
    }
  }
  std::string out;
  for (std::size_t t = 0; t < p.values.size(); ++t) {
    const double x = left + cell * static_cast<double>(t % p.image_side);
    const double y = top + cell * static_cast<double>(t / p.image_side);
    const int g = static_cast<int>(255.0 * (1.0 - std::clamp(p.values[t], 0.0, 1.0)));
    char fill[16];
    std::snprintf(fill, sizeof fill, "#%02x%02x%02x", g, g, g);
    out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cell) + "\" height=\"" + num(cell) +
           "\" fill=\"" + fill + "\"/>\n";
    if (owner[t] >= 0) {
      out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cell) + "\" height=\"" + num(cell) +
             "\" fill=\"" + color(static_cast<std::size_t>(owner[t])) + "\" fill-opacity=\"0.45\"/>\n";
    }
  }
  return out;
}

}  // namespace

HighlightPlot highlight(std::span<const double> x, const logic::Rule& rule, const train::TrainedModel& model) {
  const auto& cfg = model.config.symbolizer;
  const std::size_t length = x.size();
  for (const auto& p : rule.body) {
    if (p.region >= cfg.regions) throw InvalidArgument("rule references region " + std::to_string(p.region) +
                                                       " but the model has " + std::to_string(cfg.regions));
    if (p.pattern >= cfg.clusters) throw InvalidArgument("rule references pattern " + std::to_string(p.pattern) +
                                                         " but the model has " + std::to_string(cfg.clusters));
  }
  HighlightPlot plot;
  plot.values.assign(x.begin(), x.end());
  plot.caption = logic::format_rule(rule);
  plot.image_side = length == kImageSide * kImageSide ? kImageSide : 0;

  const auto sym = train::symbolize_with(model, x);
  const auto clusters = train::window_clusters(model, x);
  const std::size_t region_len = sym::region_length(length, cfg.regions);
  for (std::size_t pi = 0; pi < rule.body.size(); ++pi) {
    const auto& p = rule.body[pi];
    if (sym.discretized[logic::atom_index(p, cfg.clusters)] == 0) continue;
    bool any = false;
    for (std::size_t w = 0; w < clusters.size(); ++w) {
      if (clusters[w] == p.pattern && sym::assign_region(w, length, cfg.regions) == p.region) {
        plot.spans.push_back({w, w + cfg.window, pi});
        any = true;
      }
    }
    if (!any) {
      const std::size_t begin = std::min(length, p.region * region_len);
      const std::size_t end = p.region + 1 == cfg.regions ? length : std::min(length, begin + region_len);
      plot.spans.push_back({begin, std::max(begin, end), pi});
    }
  }
  return plot;
}

std::string render_svg(const HighlightPlot& plot) {
  const bool image = plot.image_side != 0;
  const double width = image ? 340 : 800;
  const double height = image ? 340 : 300;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
                    num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"10\" y=\"22\" font-family=\"monospace\" font-size=\"12\">" + escape(plot.caption) + "</text>\n";
  if (!plot.values.empty()) out += image ? image_svg(plot) : sequence_svg(plot);
  return out + "</svg>\n";
}

HighlightPlot render_highlights(std::span<const double> x, const logic::Rule& rule, const train::TrainedModel& model,
                                const std::filesystem::path& path) {
  HighlightPlot plot = highlight(x, rule, model);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write plot " + path.string());
  out << render_svg(plot);
  if (!out) throw IoError("write failed for " + path.string());
  return plot;
}

}  // namespace seqrules::plot
