#pragma once

#include <string>
#include <variant>
#include <vector>

#include "idslab/correlation.hpp"
#include "idslab/explain.hpp"
#include "idslab/metrics.hpp"

namespace idslab {

enum class ChartKind { ImportanceBars, Force, Beeswarm, Dependence, Heatmap, ConfusionTable };

const char* to_string(ChartKind kind) noexcept;

using ChartPayload = std::variant<std::vector<ImportanceEntry>, ForceData,
                                  std::vector<BeeswarmSeries>, DependenceData,
                                  CorrelationMatrix, ConfusionMatrix>;

struct Chart {
  std::string title;
  ChartPayload payload;
  double width = 800.0;
  double height = 600.0;

  ChartKind kind() const noexcept { return static_cast<ChartKind>(payload.index()); }
};

/// Renders a chart as an SVG 1.1 document using only rect, circle, line, text
/// and title elements. Output depends only on the chart, so identical charts
/// give identical bytes. Heatmap cells carry class="cell"; undefined
/// correlations are left blank.
std::string render_svg(const Chart& chart);

/// Diverging fill for a correlation in [-1, 1]: teal at -1, near-white at 0,
/// dark brown at +1.
std::string diverging_color(double value);

}  // namespace idslab
