#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "idslab/matrix.hpp"
#include "idslab/rng.hpp"

namespace idslab {

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  double train_fraction = 0.8;
};

/// Shuffles 0..n-1 and takes the first floor(fraction * n) as the training
/// partition.
SplitIndices split(std::size_t n, double fraction, Rng& rng);

/// Standardization parameters fitted on training rows. Features whose training
/// values are all identical are flagged and transform to 0.
struct ScalerParams {
  std::vector<double> mean;
  std::vector<double> std;  // population standard deviation
  std::vector<bool> zero_variance;

  std::size_t size() const noexcept { return mean.size(); }
};

ScalerParams fit_scaler(const Matrix& x, std::span<const std::size_t> rows);
/// Fits on every row of `x`.
ScalerParams fit_scaler(const Matrix& x);
Matrix apply_scaler(const ScalerParams& params, const Matrix& x);

/// True when every entry of the column is bitwise-equal to the first one.
bool is_constant(std::span<const double> values) noexcept;

}  // namespace idslab
