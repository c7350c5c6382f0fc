#include "idslab/shapley.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <cstdio>
#include <limits>
#include <map>

#include "idslab/error.hpp"
#include "idslab/rng.hpp"

namespace idslab {

namespace {

using Coalition = std::vector<std::uint8_t>;

// Composite rows per model call when evaluating coalitions.
constexpr std::size_t kRowsPerBatch = 1u << 15;

void check_inputs(const Matrix& background, std::span<const double> x) {
  if (background.rows() == 0) fail(ErrorKind::Argument, "background set is empty");
  if (x.empty()) fail(ErrorKind::Argument, "explained sample has no features");
  if (background.cols() != x.size()) {
    fail(ErrorKind::Dimension, "background " + background.shape() + " does not match a sample of " +
                                   std::to_string(x.size()) + " features");
  }
}

Matrix evaluate(const ModelFn& model, const Matrix& rows) {
  Matrix out = model(rows);
  if (out.rows() != rows.rows() || out.cols() == 0) {
    fail(ErrorKind::Dimension, "model returned " + out.shape() + " for " +
                                   std::to_string(rows.rows()) + " samples");
  }
  return out;
}

/// Mean model output over the background for each coalition; one row per
/// coalition, one column per model output.
Matrix coalition_values(const ModelFn& model, const Matrix& background, std::span<const double> x,
                        const std::vector<Coalition>& coalitions, std::size_t outputs) {
  const std::size_t n_bg = background.rows();
  const std::size_t m = x.size();
  const std::size_t per_batch = std::max<std::size_t>(1, kRowsPerBatch / n_bg);
  Matrix values(coalitions.size(), outputs);

  for (std::size_t start = 0; start < coalitions.size(); start += per_batch) {
    const std::size_t stop = std::min(coalitions.size(), start + per_batch);
    Matrix composite((stop - start) * n_bg, m);
    for (std::size_t c = start; c < stop; ++c) {
      for (std::size_t b = 0; b < n_bg; ++b) {
        auto dst = composite.row((c - start) * n_bg + b);
        const auto src = background.row(b);
        for (std::size_t j = 0; j < m; ++j) dst[j] = coalitions[c][j] ? x[j] : src[j];
      }
    }
    const Matrix out = evaluate(model, composite);
    if (out.cols() != outputs) fail(ErrorKind::Dimension, "model output width changed between calls");
    for (std::size_t c = start; c < stop; ++c) {
      for (std::size_t k = 0; k < outputs; ++k) {
        double sum = 0.0;
        for (std::size_t b = 0; b < n_bg; ++b) sum += out((c - start) * n_bg + b, k);
        values(c, k) = sum / static_cast<double>(n_bg);
      }
    }
  }
  return values;
}

/// Base values and the prediction on x.
void anchor_values(const ModelFn& model, const Matrix& background, std::span<const double> x,
                   ShapleyValues& out) {
  const Matrix bg = evaluate(model, background);
  const std::size_t outputs = bg.cols();
  out.base_value.assign(outputs, 0.0);
  for (std::size_t k = 0; k < outputs; ++k) {
    double sum = 0.0;
    for (std::size_t b = 0; b < bg.rows(); ++b) sum += bg(b, k);
    out.base_value[k] = sum / static_cast<double>(bg.rows());
  }
  Matrix sample(1, x.size(), std::vector<double>(x.begin(), x.end()));
  const Matrix fx = evaluate(model, sample);
  if (fx.cols() != outputs) fail(ErrorKind::Dimension, "model output width changed between calls");
  out.prediction.assign(fx.row(0).begin(), fx.row(0).end());
}

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

std::string format_condition(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

ModelFn scalar_model(std::function<double(std::span<const double>)> fn) {
  return [fn = std::move(fn)](const Matrix& samples) {
    Matrix out(samples.rows(), 1);
    for (std::size_t i = 0; i < samples.rows(); ++i) out(i, 0) = fn(samples.row(i));
    return out;
  };
}

double shapley_kernel_weight(std::size_t m, std::size_t s) {
  if (s == 0 || s >= m) fail(ErrorKind::Argument, "kernel weight is infinite for empty/full coalitions");
  return static_cast<double>(m - 1) /
         (binomial(m, s) * static_cast<double>(s) * static_cast<double>(m - s));
}

ShapleyValues exact_shapley(const ModelFn& model, const Matrix& background,
                            std::span<const double> x) {
  check_inputs(background, x);
  const std::size_t m = x.size();
  if (m > kMaxExactFeatures) {
    fail(ErrorKind::Capacity, "exact Shapley enumeration supports at most " +
                                  std::to_string(kMaxExactFeatures) + " features (got " +
                                  std::to_string(m) + "); use kernel_shap");
  }
  ShapleyValues out;
  anchor_values(model, background, x, out);
  const std::size_t outputs = out.base_value.size();

  const std::size_t n_masks = std::size_t{1} << m;
  std::vector<Coalition> coalitions(n_masks, Coalition(m, 0));
  for (std::size_t mask = 0; mask < n_masks; ++mask) {
    for (std::size_t j = 0; j < m; ++j) coalitions[mask][j] = (mask >> j) & 1u;
  }
  const Matrix v = coalition_values(model, background, x, coalitions, outputs);

  // |S|! (m - |S| - 1)! / m!
  std::vector<double> factorial(m + 1, 1.0);
  for (std::size_t i = 1; i <= m; ++i) factorial[i] = factorial[i - 1] * static_cast<double>(i);
  std::vector<double> weight(m, 0.0);
  for (std::size_t s = 0; s < m; ++s) weight[s] = factorial[s] * factorial[m - s - 1] / factorial[m];

  out.phi = Matrix(outputs, m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    for (std::size_t mask = 0; mask < n_masks; ++mask) {
      if (mask & bit) continue;
      const double w = weight[static_cast<std::size_t>(std::popcount(mask))];
      for (std::size_t k = 0; k < outputs; ++k) {
        out.phi(k, j) += w * (v(mask | bit, k) - v(mask, k));
      }
    }
  }
  return out;
}

Matrix solve_regularized(const Matrix& normal, const Matrix& rhs, double ridge) {
  const std::size_t p = normal.rows();
  if (normal.cols() != p || rhs.rows() != p) {
    fail(ErrorKind::Dimension, "solve_regularized: shapes " + normal.shape() + " and " + rhs.shape());
  }
  if (!(ridge >= 0.0)) fail(ErrorKind::Argument, "ridge must be >= 0");
  for (double v : normal.data()) {
    if (!std::isfinite(v)) fail(ErrorKind::Numeric, "non-finite entry in the normal matrix");
  }
  for (double v : rhs.data()) {
    if (!std::isfinite(v)) fail(ErrorKind::Numeric, "non-finite entry in the right-hand side");
  }

  // Cholesky factor of normal + ridge * I.
  Matrix chol(p, p);
  double max_pivot = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = normal(i, j) + (i == j ? ridge : 0.0);
      for (std::size_t k = 0; k < j; ++k) sum -= chol(i, k) * chol(j, k);
      if (i == j) {
        if (!(sum > 0.0)) {
          // Condition diagnostic: ratio of the largest pivot to the ridge floor.
          const double floor = ridge > 0.0 ? ridge : std::numeric_limits<double>::min();
          fail(ErrorKind::Numeric,
               "coalition system is singular beyond ridge rescue (pivot " + format_condition(sum) +
                   " at row " + std::to_string(i) + ", condition estimate >= " +
                   format_condition(std::max(max_pivot, std::abs(normal(i, i))) / floor) + ")");
        }
        max_pivot = std::max(max_pivot, sum);
        chol(i, i) = std::sqrt(sum);
      } else {
        chol(i, j) = sum / chol(j, j);
      }
    }
  }

  auto cholesky_solve = [&](std::vector<double> b) {
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t k = 0; k < i; ++k) b[i] -= chol(i, k) * b[k];
      b[i] /= chol(i, i);
    }
    for (std::size_t i = p; i-- > 0;) {
      for (std::size_t k = i + 1; k < p; ++k) b[i] -= chol(k, i) * b[k];
      b[i] /= chol(i, i);
    }
    return b;
  };

  // Proximal refinement: x <- (A + rI)^-1 (b + r x) converges to a solution
  // of A x = b whenever b lies in the range of A.
  constexpr int kMaxRefinements = 200;
  Matrix solution(p, rhs.cols());
  for (std::size_t c = 0; c < rhs.cols(); ++c) {
    const std::vector<double> b = rhs.column(c);
    std::vector<double> current(p, 0.0);
    for (int it = 0; it < kMaxRefinements; ++it) {
      std::vector<double> shifted = b;
      for (std::size_t i = 0; i < p; ++i) shifted[i] += ridge * current[i];
      std::vector<double> next = cholesky_solve(std::move(shifted));
      double change = 0.0;
      double scale_ref = 0.0;
      for (std::size_t i = 0; i < p; ++i) {
        change = std::max(change, std::abs(next[i] - current[i]));
        scale_ref = std::max(scale_ref, std::abs(next[i]));
      }
      current = std::move(next);
      if (ridge == 0.0 || change <= 1e-15 * (1.0 + scale_ref)) break;
    }
    for (std::size_t i = 0; i < p; ++i) solution(i, c) = current[i];
  }
  return solution;
}

ShapleyValues kernel_shap(const ModelFn& model, const Matrix& background,
                          std::span<const double> x, const KernelShapConfig& cfg) {
  check_inputs(background, x);
  const std::size_t m = x.size();
  ShapleyValues out;
  anchor_values(model, background, x, out);
  const std::size_t outputs = out.base_value.size();
  out.phi = Matrix(outputs, m);

  if (m == 1) {
    for (std::size_t k = 0; k < outputs; ++k) out.phi(k, 0) = out.prediction[k] - out.base_value[k];
    return out;
  }

  std::vector<Coalition> coalitions;
  std::vector<double> weights;
  const bool enumerate = m < 63 && ((std::uint64_t{1} << m) - 2) <= cfg.max_coalitions;
  if (enumerate) {
    const std::uint64_t n_masks = std::uint64_t{1} << m;
    for (std::uint64_t mask = 1; mask + 1 < n_masks; ++mask) {
      Coalition z(m, 0);
      for (std::size_t j = 0; j < m; ++j) z[j] = (mask >> j) & 1u;
      weights.push_back(shapley_kernel_weight(m, static_cast<std::size_t>(std::popcount(mask))));
      coalitions.push_back(std::move(z));
    }
  } else {
    if (cfg.max_coalitions < 2) fail(ErrorKind::Argument, "max_coalitions must be >= 2 for sampling");
    // Size distribution proportional to the total kernel mass of each size.
    std::vector<double> cumulative(m, 0.0);
    double total = 0.0;
    for (std::size_t s = 1; s < m; ++s) {
      total += 1.0 / (static_cast<double>(s) * static_cast<double>(m - s));
      cumulative[s] = total;
    }
    Rng rng(cfg.seed);
    std::map<Coalition, double> counts;
    for (std::size_t draw = 0; draw < cfg.max_coalitions / 2; ++draw) {
      const double u = rng.uniform() * total;
      std::size_t s = 1;
      while (s + 1 < m && cumulative[s] <= u) ++s;
      const auto perm = rng.shuffle(m);
      Coalition z(m, 0);
      for (std::size_t i = 0; i < s; ++i) z[perm[i]] = 1;
      Coalition complement(m, 0);
      for (std::size_t j = 0; j < m; ++j) complement[j] = z[j] ? 0 : 1;
      counts[z] += 1.0;
      counts[complement] += 1.0;
    }
    for (auto& [z, count] : counts) {
      coalitions.push_back(z);
      weights.push_back(count);
    }
  }

  const Matrix v = coalition_values(model, background, x, coalitions, outputs);

  // Eliminate the last attribution through sum(phi) = prediction - base.
  const std::size_t p = m - 1;
  Matrix normal(p, p);
  Matrix rhs(p, outputs);
  std::vector<double> a(p);
  for (std::size_t c = 0; c < coalitions.size(); ++c) {
    const auto& z = coalitions[c];
    const double last = z[m - 1];
    for (std::size_t j = 0; j < p; ++j) a[j] = static_cast<double>(z[j]) - last;
    const double w = weights[c];
    for (std::size_t i = 0; i < p; ++i) {
      if (a[i] == 0.0) continue;
      for (std::size_t j = 0; j < p; ++j) normal(i, j) += w * a[i] * a[j];
      for (std::size_t k = 0; k < outputs; ++k) {
        const double delta = out.prediction[k] - out.base_value[k];
        const double target = v(c, k) - out.base_value[k] - last * delta;
        rhs(i, k) += w * a[i] * target;
      }
    }
  }
  const Matrix beta = solve_regularized(normal, rhs, cfg.ridge);
  for (std::size_t k = 0; k < outputs; ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      out.phi(k, j) = beta(j, k);
      sum += beta(j, k);
    }
    out.phi(k, m - 1) = (out.prediction[k] - out.base_value[k]) - sum;
  }
  return out;
}

}  // namespace idslab
