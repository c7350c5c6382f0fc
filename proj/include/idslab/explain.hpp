#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "idslab/matrix.hpp"
#include "idslab/mlp.hpp"
#include "idslab/shapley.hpp"

namespace idslab {

/// Attributions of one model output (a class probability) for a set of
/// samples. phi is computed on model inputs; feature_values holds the raw
/// values shown on plots.
struct Explanation {
  Matrix phi;                        // samples x features
  double base_value = 0.0;
  std::vector<double> predictions;   // model output per sample
  Matrix feature_values;             // samples x features, raw scale
  std::vector<std::string> feature_names;
  std::size_t target_class = 0;
  std::string target_name;

  std::size_t n_samples() const noexcept { return phi.rows(); }
  std::size_t n_features() const noexcept { return phi.cols(); }
};

struct ExplainConfig {
  std::size_t background_rows = 100;
  KernelShapConfig kernel;
};

/// Up to `max_rows` rows of `x` picked by a seeded shuffle, in shuffled order.
Matrix select_background(const Matrix& x, std::size_t max_rows, std::uint64_t seed);

/// One Explanation per class of `model`. `inputs` are the rows the model
/// sees; `raw_values` are the same rows before scaling.
std::vector<Explanation> explain_model(const MlpModel& model, const Matrix& background,
                                       const Matrix& inputs, const Matrix& raw_values,
                                       const std::vector<std::string>& feature_names,
                                       const std::vector<std::string>& class_names,
                                       const KernelShapConfig& cfg);

struct ImportanceEntry {
  std::size_t feature = 0;
  std::string name;
  double mean_abs_phi = 0.0;
};

/// Mean |phi| per feature, descending; ties keep the lower index first.
std::vector<ImportanceEntry> global_importance(const Explanation& expl);

struct ForceStripe {
  std::size_t feature = 0;
  std::string name;
  double phi = 0.0;
  double raw_value = 0.0;
  int sign = 0;  // +1 pushes the output up, -1 down, 0 no effect
};

struct ForceData {
  std::string target;
  std::size_t sample = 0;
  double base_value = 0.0;
  double prediction = 0.0;
  std::vector<ForceStripe> stripes;  // by |phi| descending
};

ForceData force_data(const Explanation& expl, std::size_t sample);

struct BeeswarmSeries {
  std::size_t feature = 0;
  std::string name;
  std::vector<double> phi;
  /// Rank of the raw feature value among samples, scaled to [0, 1].
  std::vector<double> value_rank;
};

/// One point cloud per feature, ordered like global_importance.
std::vector<BeeswarmSeries> beeswarm_data(const Explanation& expl);

struct DependenceData {
  std::size_t feature = 0;
  std::string name;
  std::string target;
  std::vector<double> raw_value;
  std::vector<double> phi;
};

DependenceData dependence_data(const Explanation& expl, std::size_t feature);

/// Average ranks (ties share the mean rank) scaled to [0, 1]; 0.5 for a
/// single value.
std::vector<double> normalized_ranks(const std::vector<double>& values);

}  // namespace idslab
