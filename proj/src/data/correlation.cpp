#include "idslab/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "idslab/error.hpp"
#include "idslab/preprocess.hpp"

namespace idslab {

bool CorrelationMatrix::defined(std::size_t i, std::size_t j) const noexcept {
  return !std::isnan(values(i, j));
}

CorrelationMatrix correlation(const Matrix& x, std::vector<std::string> feature_names) {
  if (x.rows() < 2) {
    fail(ErrorKind::Argument, "correlation needs at least 2 rows, got " + std::to_string(x.rows()));
  }
  const std::size_t m = x.cols();
  if (feature_names.empty()) {
    for (std::size_t j = 0; j < m; ++j) feature_names.push_back("f" + std::to_string(j));
  }
  if (feature_names.size() != m) {
    fail(ErrorKind::Dimension, "correlation: " + std::to_string(feature_names.size()) +
                                   " names for " + std::to_string(m) + " columns");
  }

  const auto n = static_cast<double>(x.rows());
  std::vector<std::vector<double>> centered(m);
  std::vector<double> norm(m, 0.0);
  std::vector<bool> degenerate(m, false);
  for (std::size_t j = 0; j < m; ++j) {
    auto col = x.column(j);
    degenerate[j] = is_constant(col);
    double sum = 0.0;
    for (double v : col) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double& v : col) {
      v -= mean;
      ss += v * v;
    }
    if (!(ss > 0.0)) degenerate[j] = true;
    norm[j] = std::sqrt(ss);
    centered[j] = std::move(col);
  }

  const double undefined = std::numeric_limits<double>::quiet_NaN();
  CorrelationMatrix out{Matrix(m, m), std::move(feature_names)};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      double r = undefined;
      if (!degenerate[i] && !degenerate[j]) {
        if (i == j) {
          r = 1.0;
        } else {
          double cross = 0.0;
          for (std::size_t k = 0; k < centered[i].size(); ++k) cross += centered[i][k] * centered[j][k];
          r = std::clamp(cross / (norm[i] * norm[j]), -1.0, 1.0);
        }
      }
      out.values(i, j) = r;
      out.values(j, i) = r;
    }
  }
  return out;
}

}  // namespace idslab
