#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "idslab/matrix.hpp"

namespace idslab {

/// Pearson correlation between every pair of columns. Pairs involving a
/// zero-variance column are undefined and stored as NaN.
struct CorrelationMatrix {
  Matrix values;
  std::vector<std::string> feature_names;

  bool defined(std::size_t i, std::size_t j) const noexcept;
  std::size_t size() const noexcept { return values.rows(); }
};

CorrelationMatrix correlation(const Matrix& x, std::vector<std::string> feature_names = {});

}  // namespace idslab
