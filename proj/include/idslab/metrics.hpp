#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace idslab {

/// Rows are actual classes, columns are predicted classes.
struct ConfusionMatrix {
  std::vector<std::vector<std::size_t>> counts;
  std::vector<std::string> class_names;

  std::size_t k() const noexcept { return counts.size(); }
  std::size_t total() const noexcept;
  std::size_t row_sum(std::size_t c) const noexcept;
  std::size_t column_sum(std::size_t c) const noexcept;
};

/// `class_names` defaults to "0".."k-1".
ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred, std::size_t k,
                          std::vector<std::string> class_names = {});

/// Validates a hand-written matrix (square, k >= 1) and fills default names.
ConfusionMatrix make_confusion(std::vector<std::vector<std::size_t>> counts,
                               std::vector<std::string> class_names = {});

struct ClassMetrics {
  std::string name;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  // Set when the metric was 0/0 and reported as 0.
  bool precision_zero_division = false;
  bool recall_zero_division = false;
  bool f1_zero_division = false;
};

struct AveragedMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

/// Full-precision classification report. Rendering rounds to two decimals.
struct ClassReport {
  std::vector<ClassMetrics> classes;
  double accuracy = 0.0;
  std::size_t total = 0;
  AveragedMetrics macro_avg;
  AveragedMetrics weighted_avg;
};

ClassReport report(const ConfusionMatrix& cm);

/// Two-decimal rendering used by every human-readable table ("%.2f").
std::string format_2dp(double v);

/// Text table laid out like a scikit-learn classification report.
std::string format_report(const ClassReport& r);
std::string format_confusion(const ConfusionMatrix& cm);

}  // namespace idslab
