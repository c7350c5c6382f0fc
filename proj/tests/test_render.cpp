#include <cmath>
#include <limits>
#include <regex>
#include <string>
#include <vector>

#include "doctest.h"

#include "idslab/correlation.hpp"
#include "idslab/error.hpp"
#include "idslab/explain.hpp"
#include "idslab/metrics.hpp"
#include "idslab/render.hpp"

using namespace idslab;

namespace {

struct Rect {
  double x = 0, width = 0;
  std::string fill;
  std::string tooltip;
};

/// Rects whose attribute list contains `marker`.
std::vector<Rect> rects_with(const std::string& svg, const std::string& marker) {
  static const std::regex rect_re(
      R"re(<rect x="([-0-9.]+)" y="[-0-9.]+" width="([-0-9.]+)" height="[-0-9.]+" fill="(#[0-9a-f]{6})"([^>]*)>(<title>([^<]*)</title>)?)re");
  std::vector<Rect> out;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), rect_re); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[4].str().find(marker) == std::string::npos) continue;
    out.push_back({std::stod(m[1]), std::stod(m[2]), m[3], m[6]});
  }
  return out;
}

/// Checks that every opened element is closed in order. Enough for the flat
/// documents the renderer emits.
bool well_formed(const std::string& svg) {
  if (svg.rfind("<?xml", 0) != 0) return false;
  std::vector<std::string> stack;
  std::size_t pos = svg.find("?>");
  while ((pos = svg.find('<', pos)) != std::string::npos) {
    const std::size_t end = svg.find('>', pos);
    if (end == std::string::npos) return false;
    const std::string tag = svg.substr(pos + 1, end - pos - 1);
    pos = end;
    if (tag.empty()) return false;
    if (tag.back() == '/') continue;
    if (tag.front() == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    stack.push_back(tag.substr(0, tag.find(' ')));
  }
  return stack.empty();
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

CorrelationMatrix identity3() {
  CorrelationMatrix c;
  c.values = Matrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  c.feature_names = {"a", "b", "c"};
  return c;
}

ForceData sample_force() {
  ForceData f;
  f.target = "attack";
  f.base_value = 0.4;
  f.stripes = {{0, "x", 0.3, 1.5, 1}, {1, "y", -0.1, -2.0, -1}, {2, "z", 0.15, 0.25, 1}};
  f.prediction = 0.4 + 0.3 - 0.1 + 0.15;
  return f;
}

}  // namespace

TEST_CASE("diverging scale endpoints") {
  CHECK(diverging_color(1.0) == "#8c510a");
  CHECK(diverging_color(-1.0) == "#01665e");
  CHECK(diverging_color(0.0) == "#f5f5f5");
  CHECK(diverging_color(5.0) == diverging_color(1.0));
}

TEST_CASE("identity heatmap has a dark diagonal") {
  const std::string svg = render_svg(Chart{"identity", identity3()});
  CHECK(well_formed(svg));
  const auto cells = rects_with(svg, "class=\"cell\"");
  REQUIRE(cells.size() == 9);
  std::size_t dark = 0, neutral = 0;
  for (const auto& c : cells) {
    dark += c.fill == diverging_color(1.0);
    neutral += c.fill == diverging_color(0.0);
  }
  CHECK(dark == 3);
  CHECK(neutral == 6);
  CHECK(count(svg, "class=\"legend\"") == 11);
}

TEST_CASE("undefined correlations leave a blank band") {
  CorrelationMatrix c;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  c.values = Matrix{{1, nan, 0.5}, {nan, nan, nan}, {0.5, nan, 1}};
  c.feature_names = {"a", "const", "c"};
  const std::string svg = render_svg(Chart{"band", c});
  CHECK(well_formed(svg));
  const auto cells = rects_with(svg, "class=\"cell\"");
  CHECK(cells.size() == 4);
  for (const auto& cell : cells) CHECK(cell.tooltip.find("const") == std::string::npos);
  CHECK(svg.find(">const<") != std::string::npos);
}

TEST_CASE("force stripes are coloured by sign with widths proportional to phi") {
  const auto force = sample_force();
  const std::string svg = render_svg(Chart{"force", force});
  CHECK(well_formed(svg));
  const auto stripes = rects_with(svg, "stroke=\"#ffffff\"");
  REQUIRE(stripes.size() == 3);
  CHECK(stripes[0].fill == "#ff0051");
  CHECK(stripes[1].fill == "#008bfb");
  CHECK(stripes[2].fill == "#ff0051");
  const double unit = stripes[0].width / 0.3;
  CHECK(stripes[1].width == doctest::Approx(unit * 0.1).epsilon(0.01));
  CHECK(stripes[2].width == doctest::Approx(unit * 0.15).epsilon(0.01));
  CHECK(stripes[0].tooltip == "x = 1.50 (+0.30)");
  CHECK(svg.find("y = -2.00") != std::string::npos);
  CHECK(svg.find("f(x) = 0.75") != std::string::npos);
  CHECK(svg.find("base value 0.40") != std::string::npos);
}

TEST_CASE("every chart kind renders deterministically") {
  BeeswarmSeries s{0, "a", {0.1, -0.2, 0.3}, {0.0, 0.5, 1.0}};
  DependenceData d{0, "a", "attack", {1.0, 2.0, 3.0}, {0.1, -0.2, 0.3}};
  const std::vector<Chart> charts{
      {"importance", std::vector<ImportanceEntry>{{1, "b", 0.5}, {0, "a & <x>", 0.25}}},
      {"force", sample_force()},
      {"beeswarm", std::vector<BeeswarmSeries>{s}},
      {"dependence", d},
      {"heatmap", identity3()},
      {"confusion", make_confusion({{5, 1}, {2, 7}}, {"attack", "legitimate"})},
  };
  for (std::size_t k = 0; k < charts.size(); ++k) {
    CAPTURE(k);
    CHECK(static_cast<std::size_t>(charts[k].kind()) == k);
    const std::string a = render_svg(charts[k]);
    CHECK(a == render_svg(charts[k]));
    CHECK(well_formed(a));
    CHECK(a.find("<title>" + charts[k].title + "</title>") != std::string::npos);
  }
  CHECK(render_svg(charts[0]).find("a &amp; &lt;x&gt;") != std::string::npos);
  CHECK(std::string(to_string(ChartKind::Heatmap)) == "heatmap");
}

TEST_CASE("invalid charts") {
  CHECK_THROWS_AS(render_svg(Chart{"empty", std::vector<ImportanceEntry>{}}), Error);
  CHECK_THROWS_AS(render_svg(Chart{"empty", std::vector<BeeswarmSeries>{}}), Error);
  Chart sized{"sized", identity3()};
  sized.width = 0;
  CHECK_THROWS_AS(render_svg(sized), Error);
  DependenceData mismatched{0, "a", "t", {1.0, 2.0}, {0.5}};
  CHECK_THROWS_AS(render_svg(Chart{"dep", mismatched}), Error);
  ForceData bad = sample_force();
  bad.base_value = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(render_svg(Chart{"inf", bad}), Error);
}
