#include "idslab/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "idslab/error.hpp"

namespace idslab {

namespace {

constexpr const char* kPositive = "#ff0051";
constexpr const char* kNegative = "#008bfb";
constexpr const char* kAxis = "#333333";
constexpr const char* kFont = "sans-serif";

struct Rgb {
  double r, g, b;
};

constexpr Rgb kTeal{1, 102, 94};
constexpr Rgb kNeutral{245, 245, 245};
constexpr Rgb kBrown{140, 81, 10};
constexpr Rgb kBlue{0, 139, 251};
constexpr Rgb kRed{255, 0, 81};

std::string hex(Rgb c) {
  auto channel = [](double v) {
    return static_cast<int>(std::lround(std::clamp(v, 0.0, 255.0)));
  };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(c.r), channel(c.g), channel(c.b));
  return buf;
}

Rgb lerp(Rgb a, Rgb b, double t) {
  return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

std::string num(double v) {
  if (!std::isfinite(v)) fail(ErrorKind::Numeric, "non-finite coordinate in chart");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  return s == "-0.00" ? "0.00" : s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

class SvgDocument {
 public:
  SvgDocument(double width, double height) : width_(width), height_(height) {}

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& extra = "", const std::string& tooltip = "") {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(std::max(w, 0.0)) +
             "\" height=\"" + num(std::max(h, 0.0)) + "\" fill=\"" + fill + "\"" + extra;
    close(tooltip, "rect");
  }

  void circle(double cx, double cy, double r, const std::string& fill,
              const std::string& tooltip = "") {
    body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" +
             fill + "\"";
    close(tooltip, "circle");
  }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke = kAxis,
            double width = 1.0) {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
             num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"/>\n";
  }

  void text(double x, double y, const std::string& content, const char* anchor = "start",
            double size = 12.0, const std::string& fill = kAxis) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"" + kFont +
             "\" font-size=\"" + num(size) + "\" text-anchor=\"" + anchor + "\" fill=\"" + fill +
             "\">" + escape(content) + "</text>\n";
  }

  std::string finish(const std::string& title) const {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width_) +
           "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) +
           "\">\n";
    out += "<title>" + escape(title) + "</title>\n";
    out += "<rect x=\"0.00\" y=\"0.00\" width=\"" + num(width_) + "\" height=\"" + num(height_) +
           "\" fill=\"#ffffff\"/>\n";
    out += body_;
    out += "</svg>\n";
    return out;
  }

 private:
  void close(const std::string& tooltip, const char* tag) {
    if (tooltip.empty()) {
      body_ += "/>\n";
    } else {
      body_ += "><title>" + escape(tooltip) + "</title></" + tag + ">\n";
    }
  }

  double width_;
  double height_;
  std::string body_;
};

struct Frame {
  double left, top, right, bottom;
  double width() const { return right - left; }
  double height() const { return bottom - top; }
};

Frame frame_for(const Chart& chart, double left_margin) {
  return {left_margin, 50.0, chart.width - 30.0, chart.height - 50.0};
}

/// Linear map from [lo, hi] onto [a, b]; a degenerate domain maps to the middle.
struct Scale {
  double lo, hi, a, b;
  double operator()(double v) const {
    if (hi == lo) return 0.5 * (a + b);
    return a + (v - lo) / (hi - lo) * (b - a);
  }
};

void heading(SvgDocument& svg, const Chart& chart) {
  svg.text(chart.width / 2.0, 28.0, chart.title, "middle", 16.0);
}

void render_importance(SvgDocument& svg, const Chart& chart,
                       const std::vector<ImportanceEntry>& entries) {
  const Frame f = frame_for(chart, 200.0);
  double peak = 0.0;
  for (const auto& e : entries) peak = std::max(peak, e.mean_abs_phi);
  const Scale xs{0.0, peak > 0.0 ? peak : 1.0, f.left, f.right - 60.0};
  const double band = f.height() / static_cast<double>(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const double y = f.top + band * static_cast<double>(i);
    const double w = xs(e.mean_abs_phi) - f.left;
    svg.rect(f.left, y + band * 0.15, w, band * 0.7, kNegative, "",
             e.name + ": " + format_2dp(e.mean_abs_phi));
    svg.text(f.left - 8.0, y + band * 0.5 + 4.0, e.name, "end");
    svg.text(f.left + w + 6.0, y + band * 0.5 + 4.0, format_2dp(e.mean_abs_phi));
  }
  svg.line(f.left, f.top, f.left, f.bottom);
  svg.line(f.left, f.bottom, f.right, f.bottom);
  svg.text((f.left + f.right) / 2.0, f.bottom + 32.0, "mean(|SHAP value|)", "middle");
}

void render_force(SvgDocument& svg, const Chart& chart, const ForceData& force) {
  const Frame f = frame_for(chart, 40.0);
  double lo = std::min(force.base_value, force.prediction);
  double hi = std::max(force.base_value, force.prediction);
  double cursor = force.base_value;
  for (const auto& s : force.stripes) {
    cursor += s.phi;
    lo = std::min(lo, cursor);
    hi = std::max(hi, cursor);
  }
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.1 * (hi - lo);
  lo -= pad;
  hi += pad;
  const Scale xs{lo, hi, f.left, f.right};
  const double bar_top = f.top + f.height() * 0.35;
  const double bar_height = f.height() * 0.2;

  cursor = force.base_value;
  for (std::size_t i = 0; i < force.stripes.size(); ++i) {
    const auto& s = force.stripes[i];
    if (s.sign == 0) continue;
    const double x0 = xs(std::min(cursor, cursor + s.phi));
    const double x1 = xs(std::max(cursor, cursor + s.phi));
    const std::string tooltip =
        s.name + " = " + format_2dp(s.raw_value) + " (" + (s.phi > 0 ? "+" : "") +
        format_2dp(s.phi) + ")";
    svg.rect(x0, bar_top, x1 - x0, bar_height, s.sign > 0 ? kPositive : kNegative,
             " stroke=\"#ffffff\" stroke-width=\"1.00\"", tooltip);
    // Label the stripes in alternating rows below the bar.
    const double label_y = bar_top + bar_height + 18.0 + 14.0 * static_cast<double>(i % 4);
    svg.text((x0 + x1) / 2.0, label_y, s.name + " = " + format_2dp(s.raw_value), "middle", 10.0,
             s.sign > 0 ? kPositive : kNegative);
    cursor += s.phi;
  }
  const double base_x = xs(force.base_value);
  const double pred_x = xs(force.prediction);
  svg.line(base_x, bar_top - 30.0, base_x, bar_top + bar_height + 8.0, "#777777");
  svg.text(base_x, bar_top - 36.0, "base value " + format_2dp(force.base_value), "middle", 11.0);
  svg.line(pred_x, bar_top - 12.0, pred_x, bar_top + bar_height, kAxis, 2.0);
  svg.text(pred_x, bar_top - 16.0, "f(x) = " + format_2dp(force.prediction), "middle", 13.0);
  svg.line(f.left, f.bottom, f.right, f.bottom);
  svg.text(f.left, f.bottom + 18.0, format_2dp(lo), "start", 10.0);
  svg.text(f.right, f.bottom + 18.0, format_2dp(hi), "end", 10.0);
  svg.text((f.left + f.right) / 2.0, f.bottom + 34.0, "output: " + force.target, "middle");
}

void render_beeswarm(SvgDocument& svg, const Chart& chart,
                     const std::vector<BeeswarmSeries>& series) {
  const Frame f = frame_for(chart, 200.0);
  double lo = 0.0, hi = 0.0;
  for (const auto& s : series) {
    for (double v : s.phi) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi == lo) {
    lo -= 1.0;
    hi += 1.0;
  }
  const Scale xs{lo, hi, f.left, f.right - 20.0};
  const double band = f.height() / static_cast<double>(series.size());
  const double zero_x = xs(0.0);
  svg.line(zero_x, f.top, zero_x, f.bottom, "#999999");

  for (std::size_t r = 0; r < series.size(); ++r) {
    const auto& s = series[r];
    const double center = f.top + band * (static_cast<double>(r) + 0.5);
    svg.text(f.left - 8.0, center + 4.0, s.name, "end");
    // Points falling in the same 3px bin are spread alternately above and
    // below the row center.
    std::map<long, int> occupancy;
    for (std::size_t i = 0; i < s.phi.size(); ++i) {
      const double x = xs(s.phi[i]);
      const long bin = std::lround(x / 3.0);
      const int k = occupancy[bin]++;
      const double offset = (k % 2 == 0 ? 1.0 : -1.0) * static_cast<double>((k + 1) / 2) * 2.5;
      const double y = center + std::clamp(offset, -band * 0.45, band * 0.45);
      svg.circle(x, y, 2.5, hex(lerp(kBlue, kRed, s.value_rank[i])),
                 s.name + ": " + format_2dp(s.phi[i]));
    }
  }
  svg.line(f.left, f.bottom, f.right, f.bottom);
  svg.text(f.left, f.bottom + 18.0, format_2dp(lo), "start", 10.0);
  svg.text(f.right - 20.0, f.bottom + 18.0, format_2dp(hi), "end", 10.0);
  svg.text((f.left + f.right) / 2.0, f.bottom + 34.0, "SHAP value (blue = low, red = high feature value)",
           "middle");
}

void render_dependence(SvgDocument& svg, const Chart& chart, const DependenceData& dep) {
  const Frame f = frame_for(chart, 80.0);
  auto [xmin_it, xmax_it] = std::minmax_element(dep.raw_value.begin(), dep.raw_value.end());
  auto [ymin_it, ymax_it] = std::minmax_element(dep.phi.begin(), dep.phi.end());
  double xlo = *xmin_it, xhi = *xmax_it, ylo = std::min(*ymin_it, 0.0), yhi = std::max(*ymax_it, 0.0);
  if (xhi == xlo) {
    xlo -= 1.0;
    xhi += 1.0;
  }
  if (yhi == ylo) {
    ylo -= 1.0;
    yhi += 1.0;
  }
  const Scale xs{xlo, xhi, f.left + 10.0, f.right - 10.0};
  const Scale ys{ylo, yhi, f.bottom - 10.0, f.top + 10.0};
  svg.line(f.left, f.top, f.left, f.bottom);
  svg.line(f.left, f.bottom, f.right, f.bottom);
  svg.line(f.left, ys(0.0), f.right, ys(0.0), "#cccccc");

  const auto ranks = normalized_ranks(dep.raw_value);
  for (std::size_t i = 0; i < dep.phi.size(); ++i) {
    svg.circle(xs(dep.raw_value[i]), ys(dep.phi[i]), 3.0, hex(lerp(kBlue, kRed, ranks[i])),
               dep.name + " = " + format_2dp(dep.raw_value[i]) + ", SHAP " + format_2dp(dep.phi[i]));
  }
  svg.text(f.left, f.bottom + 18.0, format_2dp(xlo), "start", 10.0);
  svg.text(f.right, f.bottom + 18.0, format_2dp(xhi), "end", 10.0);
  svg.text(f.left - 6.0, f.bottom - 6.0, format_2dp(ylo), "end", 10.0);
  svg.text(f.left - 6.0, f.top + 10.0, format_2dp(yhi), "end", 10.0);
  svg.text((f.left + f.right) / 2.0, f.bottom + 34.0, dep.name, "middle");
  svg.text(f.left - 40.0, f.top - 12.0, "SHAP value for " + dep.name + " (" + dep.target + ")",
           "start", 11.0);
}

void render_heatmap(SvgDocument& svg, const Chart& chart, const CorrelationMatrix& corr) {
  const std::size_t n = corr.size();
  const Frame f = frame_for(chart, 180.0);
  const double legend_width = 70.0;
  const double side = std::min(f.width() - legend_width, f.height() - 60.0);
  const double cell = side / static_cast<double>(n);
  const double font = std::clamp(cell * 0.3, 6.0, 12.0);

  for (std::size_t i = 0; i < n; ++i) {
    const double y = f.top + cell * static_cast<double>(i);
    svg.text(f.left - 6.0, y + cell * 0.5 + 4.0, corr.feature_names[i], "end", font);
    for (std::size_t j = 0; j < n; ++j) {
      if (!corr.defined(i, j)) continue;
      const double v = corr.values(i, j);
      const double x = f.left + cell * static_cast<double>(j);
      svg.rect(x, y, cell, cell, diverging_color(v), " class=\"cell\"",
               corr.feature_names[i] + " / " + corr.feature_names[j] + ": " + format_2dp(v));
      if (n <= 20) {
        svg.text(x + cell * 0.5, y + cell * 0.5 + font * 0.35, format_2dp(v), "middle", font,
                 std::abs(v) > 0.6 ? "#ffffff" : kAxis);
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    svg.text(f.left + cell * (static_cast<double>(j) + 0.5), f.top + side + 14.0,
             corr.feature_names[j], "middle", font);
  }
  // Legend: eleven swatches from -1 to +1.
  const double lx = f.left + side + 25.0;
  const double swatch = side / 11.0;
  for (int k = 0; k <= 10; ++k) {
    const double v = 1.0 - 0.2 * k;
    svg.rect(lx, f.top + swatch * k, 18.0, swatch, diverging_color(v), " class=\"legend\"");
    if (k % 5 == 0) svg.text(lx + 24.0, f.top + swatch * (k + 0.5) + 4.0, format_2dp(v), "start", 10.0);
  }
}

void render_confusion(SvgDocument& svg, const Chart& chart, const ConfusionMatrix& cm) {
  const std::size_t k = cm.k();
  const Frame f = frame_for(chart, 200.0);
  const double side = std::min(f.width(), f.height() - 40.0);
  const double cell = side / static_cast<double>(k);
  std::size_t peak = 1;
  for (const auto& row : cm.counts) {
    for (auto v : row) peak = std::max(peak, v);
  }
  svg.text(f.left + side / 2.0, f.top - 4.0, "Predicted", "middle", 13.0);
  svg.text(f.left - 8.0, f.top - 4.0, "Actual", "end", 13.0);
  for (std::size_t a = 0; a < k; ++a) {
    const double y = f.top + 20.0 + cell * static_cast<double>(a);
    svg.text(f.left - 8.0, y + cell * 0.5 + 4.0, cm.class_names[a], "end");
    for (std::size_t p = 0; p < k; ++p) {
      const double x = f.left + cell * static_cast<double>(p);
      const double t = static_cast<double>(cm.counts[a][p]) / static_cast<double>(peak);
      svg.rect(x, y, cell, cell, hex(lerp(Rgb{255, 255, 255}, Rgb{49, 130, 189}, t)),
               " stroke=\"#333333\" stroke-width=\"1.00\"",
               cm.class_names[a] + " -> " + cm.class_names[p] + ": " +
                   std::to_string(cm.counts[a][p]));
      svg.text(x + cell * 0.5, y + cell * 0.5 + 6.0, std::to_string(cm.counts[a][p]), "middle",
               18.0, t > 0.6 ? "#ffffff" : kAxis);
    }
  }
  for (std::size_t p = 0; p < k; ++p) {
    svg.text(f.left + cell * (static_cast<double>(p) + 0.5), f.top + 20.0 + side + 16.0,
             cm.class_names[p], "middle");
  }
}

bool payload_empty(const ChartPayload& payload) {
  return std::visit(
      [](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ForceData>) {
          return p.stripes.empty();
        } else if constexpr (std::is_same_v<T, DependenceData>) {
          return p.phi.empty() || p.phi.size() != p.raw_value.size();
        } else if constexpr (std::is_same_v<T, CorrelationMatrix>) {
          return p.size() == 0 || p.feature_names.size() != p.size();
        } else if constexpr (std::is_same_v<T, ConfusionMatrix>) {
          return p.k() == 0 || p.class_names.size() != p.k();
        } else if constexpr (std::is_same_v<T, std::vector<BeeswarmSeries>>) {
          if (p.empty()) return true;
          for (const auto& s : p) {
            if (s.phi.empty() || s.phi.size() != s.value_rank.size()) return true;
          }
          return false;
        } else {
          return p.empty();
        }
      },
      payload);
}

}  // namespace

const char* to_string(ChartKind kind) noexcept {
  switch (kind) {
    case ChartKind::ImportanceBars: return "importance_bars";
    case ChartKind::Force: return "force";
    case ChartKind::Beeswarm: return "beeswarm";
    case ChartKind::Dependence: return "dependence";
    case ChartKind::Heatmap: return "heatmap";
    case ChartKind::ConfusionTable: return "confusion_table";
  }
  return "unknown";
}

std::string diverging_color(double value) {
  const double v = std::clamp(value, -1.0, 1.0);
  return v < 0.0 ? hex(lerp(kNeutral, kTeal, -v)) : hex(lerp(kNeutral, kBrown, v));
}

std::string render_svg(const Chart& chart) {
  if (!(chart.width > 0.0) || !(chart.height > 0.0)) {
    fail(ErrorKind::Argument, "chart dimensions must be positive");
  }
  if (payload_empty(chart.payload)) {
    fail(ErrorKind::Argument, std::string("empty ") + to_string(chart.kind()) + " chart payload");
  }
  SvgDocument svg(chart.width, chart.height);
  heading(svg, chart);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::vector<ImportanceEntry>>) {
          render_importance(svg, chart, p);
        } else if constexpr (std::is_same_v<T, ForceData>) {
          render_force(svg, chart, p);
        } else if constexpr (std::is_same_v<T, std::vector<BeeswarmSeries>>) {
          render_beeswarm(svg, chart, p);
        } else if constexpr (std::is_same_v<T, DependenceData>) {
          render_dependence(svg, chart, p);
        } else if constexpr (std::is_same_v<T, CorrelationMatrix>) {
          render_heatmap(svg, chart, p);
        } else {
          render_confusion(svg, chart, p);
        }
      },
      chart.payload);
  return svg.finish(chart.title);
}

}  // namespace idslab
