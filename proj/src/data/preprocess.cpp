#include "idslab/preprocess.hpp"

#include <cmath>
#include <numeric>

#include "idslab/error.hpp"

namespace idslab {

SplitIndices split(std::size_t n, double fraction, Rng& rng) {
  if (n < 2) fail(ErrorKind::Argument, "split needs at least 2 samples, got " + std::to_string(n));
  if (!(fraction > 0.0 && fraction < 1.0)) {
    fail(ErrorKind::Argument, "split fraction must lie in (0, 1), got " + std::to_string(fraction));
  }
  const auto perm = rng.shuffle(n);
  const auto n_train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  SplitIndices out;
  out.train_fraction = fraction;
  out.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  return out;
}

bool is_constant(std::span<const double> values) noexcept {
  for (double v : values) {
    if (v != values.front()) return false;
  }
  return true;
}

ScalerParams fit_scaler(const Matrix& x, std::span<const std::size_t> rows) {
  if (rows.empty()) fail(ErrorKind::Argument, "fit_scaler needs at least one training row");
  const std::size_t m = x.cols();
  const auto count = static_cast<double>(rows.size());
  ScalerParams p;
  p.mean.assign(m, 0.0);
  p.std.assign(m, 0.0);
  p.zero_variance.assign(m, false);

  std::vector<double> column(rows.size());
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) column[i] = x(rows[i], j);
    double sum = 0.0;
    for (double v : column) sum += v;
    const double mean = sum / count;
    double ss = 0.0;
    for (double v : column) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / count);
    p.mean[j] = mean;
    if (is_constant(column) || !(sd > 0.0)) {
      p.zero_variance[j] = true;
      p.std[j] = 0.0;
    } else {
      p.std[j] = sd;
    }
  }
  return p;
}

ScalerParams fit_scaler(const Matrix& x) {
  std::vector<std::size_t> all(x.rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return fit_scaler(x, all);
}

Matrix apply_scaler(const ScalerParams& params, const Matrix& x) {
  if (params.size() != x.cols()) {
    fail(ErrorKind::Dimension, "scaler fitted on " + std::to_string(params.size()) +
                                   " features applied to " + x.shape());
  }
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      out(i, j) = params.zero_variance[j] ? 0.0 : (x(i, j) - params.mean[j]) / params.std[j];
    }
  }
  return out;
}

}  // namespace idslab
