#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "idslab/matrix.hpp"

namespace idslab {

/// Black-box model evaluated on a batch of samples (one per row). Returns a
/// rows x outputs matrix; scalar models return a single column.
using ModelFn = std::function<Matrix(const Matrix& samples)>;

/// Wraps a per-sample scalar function as a single-output ModelFn.
ModelFn scalar_model(std::function<double(std::span<const double>)> fn);

/// Attributions for every model output of one explained sample.
struct ShapleyValues {
  Matrix phi;                       // outputs x features
  std::vector<double> base_value;   // mean output over the background
  std::vector<double> prediction;   // output on the explained sample
};

inline constexpr std::size_t kMaxExactFeatures = 12;

/// Shapley values by enumerating all 2^m coalitions. The value of a coalition
/// S is the mean model output over background rows with the sample's values
/// substituted on S. Capacity error above kMaxExactFeatures.
ShapleyValues exact_shapley(const ModelFn& model, const Matrix& background,
                            std::span<const double> x);

struct KernelShapConfig {
  /// Full enumeration when 2^m - 2 fits; otherwise this many sampled draws.
  std::size_t max_coalitions = 2048;
  double ridge = 1e-6;
  std::uint64_t seed = 0;
};

/// Kernel SHAP: weighted least squares over coalitions with the Shapley
/// kernel weights, constrained so attributions sum to prediction - base.
ShapleyValues kernel_shap(const ModelFn& model, const Matrix& background,
                          std::span<const double> x, const KernelShapConfig& cfg);

/// Shapley kernel weight (m - 1) / (C(m, s) * s * (m - s)) for 0 < s < m.
double shapley_kernel_weight(std::size_t m, std::size_t s);

/// Solves (A + ridge * I) x = b for symmetric positive semi-definite A and
/// refines the result so the ridge does not bias a well-posed system. Each
/// column of `rhs` is solved independently. Numeric error with a condition
/// estimate when the factorization breaks down.
Matrix solve_regularized(const Matrix& normal, const Matrix& rhs, double ridge);

}  // namespace idslab
