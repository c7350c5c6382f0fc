#include "idslab/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include "idslab/error.hpp"

namespace idslab {

namespace {

std::vector<std::string> default_names(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < k; ++c) names.push_back(std::to_string(c));
  return names;
}

// 0/0 -> 0 with the flag raised.
double safe_ratio(double num, double den, bool& zero_division) {
  if (den == 0.0) {
    zero_division = true;
    return 0.0;
  }
  return num / den;
}

}  // namespace

std::size_t ConfusionMatrix::total() const noexcept {
  std::size_t t = 0;
  for (const auto& row : counts) {
    for (auto v : row) t += v;
  }
  return t;
}

std::size_t ConfusionMatrix::row_sum(std::size_t c) const noexcept {
  std::size_t t = 0;
  for (auto v : counts[c]) t += v;
  return t;
}

std::size_t ConfusionMatrix::column_sum(std::size_t c) const noexcept {
  std::size_t t = 0;
  for (const auto& row : counts) t += row[c];
  return t;
}

ConfusionMatrix make_confusion(std::vector<std::vector<std::size_t>> counts,
                               std::vector<std::string> class_names) {
  const std::size_t k = counts.size();
  if (k == 0) fail(ErrorKind::Argument, "confusion matrix is empty");
  for (const auto& row : counts) {
    if (row.size() != k) fail(ErrorKind::Argument, "confusion matrix must be square");
  }
  if (class_names.empty()) class_names = default_names(k);
  if (class_names.size() != k) {
    fail(ErrorKind::Argument, std::to_string(class_names.size()) + " class names for a " +
                                  std::to_string(k) + "-class confusion matrix");
  }
  return {std::move(counts), std::move(class_names)};
}

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred, std::size_t k,
                          std::vector<std::string> class_names) {
  if (y_true.size() != y_pred.size()) {
    fail(ErrorKind::Argument, "confusion: " + std::to_string(y_true.size()) + " true labels vs " +
                                  std::to_string(y_pred.size()) + " predictions");
  }
  if (k == 0) fail(ErrorKind::Argument, "confusion: k must be >= 1");
  std::vector<std::vector<std::size_t>> counts(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int a = y_true[i];
    const int p = y_pred[i];
    if (a < 0 || p < 0 || static_cast<std::size_t>(a) >= k || static_cast<std::size_t>(p) >= k) {
      fail(ErrorKind::Argument, "confusion: code out of range at sample " + std::to_string(i));
    }
    ++counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)];
  }
  return make_confusion(std::move(counts), std::move(class_names));
}

ClassReport report(const ConfusionMatrix& cm) {
  if (cm.k() == 0) fail(ErrorKind::Argument, "report: empty confusion matrix");
  const std::size_t total = cm.total();
  if (total == 0) fail(ErrorKind::Argument, "report: confusion matrix has no samples");

  ClassReport r;
  r.total = total;
  std::size_t trace = 0;
  for (std::size_t c = 0; c < cm.k(); ++c) {
    ClassMetrics m;
    m.name = c < cm.class_names.size() ? cm.class_names[c] : std::to_string(c);
    const auto tp = static_cast<double>(cm.counts[c][c]);
    trace += cm.counts[c][c];
    m.support = cm.row_sum(c);
    m.precision = safe_ratio(tp, static_cast<double>(cm.column_sum(c)), m.precision_zero_division);
    m.recall = safe_ratio(tp, static_cast<double>(m.support), m.recall_zero_division);
    m.f1 = safe_ratio(2.0 * m.precision * m.recall, m.precision + m.recall, m.f1_zero_division);
    r.classes.push_back(std::move(m));
  }
  r.accuracy = static_cast<double>(trace) / static_cast<double>(total);

  const auto k = static_cast<double>(cm.k());
  for (const auto& m : r.classes) {
    r.macro_avg.precision += m.precision;
    r.macro_avg.recall += m.recall;
    r.macro_avg.f1 += m.f1;
    const auto w = static_cast<double>(m.support);
    r.weighted_avg.precision += w * m.precision;
    r.weighted_avg.recall += w * m.recall;
    r.weighted_avg.f1 += w * m.f1;
  }
  r.macro_avg.precision /= k;
  r.macro_avg.recall /= k;
  r.macro_avg.f1 /= k;
  r.macro_avg.support = total;
  const auto n = static_cast<double>(total);
  r.weighted_avg.precision /= n;
  r.weighted_avg.recall /= n;
  r.weighted_avg.f1 /= n;
  r.weighted_avg.support = total;
  return r;
}

std::string format_2dp(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string format_report(const ClassReport& r) {
  std::size_t width = 12;
  for (const auto& m : r.classes) width = std::max(width, m.name.size());
  char line[512];
  std::string out;
  std::snprintf(line, sizeof line, "%*s %10s %10s %10s %10s\n", static_cast<int>(width), "",
                "precision", "recall", "f1-score", "support");
  out += line;
  out += "\n";
  for (const auto& m : r.classes) {
    std::snprintf(line, sizeof line, "%*s %10s %10s %10s %10zu\n", static_cast<int>(width),
                  m.name.c_str(), format_2dp(m.precision).c_str(), format_2dp(m.recall).c_str(),
                  format_2dp(m.f1).c_str(), m.support);
    out += line;
  }
  out += "\n";
  std::snprintf(line, sizeof line, "%*s %10s %10s %10s %10zu\n", static_cast<int>(width),
                "accuracy", "", "", format_2dp(r.accuracy).c_str(), r.total);
  out += line;
  auto avg_line = [&](const char* label, const AveragedMetrics& a) {
    std::snprintf(line, sizeof line, "%*s %10s %10s %10s %10zu\n", static_cast<int>(width), label,
                  format_2dp(a.precision).c_str(), format_2dp(a.recall).c_str(),
                  format_2dp(a.f1).c_str(), a.support);
    out += line;
  };
  avg_line("macro avg", r.macro_avg);
  avg_line("weighted avg", r.weighted_avg);
  return out;
}

std::string format_confusion(const ConfusionMatrix& cm) {
  const std::string corner = "actual\\pred";
  std::size_t label_width = corner.size();
  std::size_t width = 6;
  for (const auto& n : cm.class_names) {
    label_width = std::max(label_width, n.size());
    width = std::max(width, n.size());
  }
  std::string out;
  char cell[256];
  std::snprintf(cell, sizeof cell, "%*s", static_cast<int>(label_width), corner.c_str());
  out += cell;
  for (const auto& n : cm.class_names) {
    std::snprintf(cell, sizeof cell, " %*s", static_cast<int>(width), n.c_str());
    out += cell;
  }
  out += "\n";
  for (std::size_t a = 0; a < cm.k(); ++a) {
    std::snprintf(cell, sizeof cell, "%*s", static_cast<int>(label_width),
                  cm.class_names[a].c_str());
    out += cell;
    for (auto v : cm.counts[a]) {
      std::snprintf(cell, sizeof cell, " %*zu", static_cast<int>(width), v);
      out += cell;
    }
    out += "\n";
  }
  return out;
}

}  // namespace idslab
