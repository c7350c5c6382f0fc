#include "idslab/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "idslab/error.hpp"
#include "idslab/rng.hpp"

namespace idslab {

Matrix select_background(const Matrix& x, std::size_t max_rows, std::uint64_t seed) {
  if (x.rows() == 0) fail(ErrorKind::Argument, "cannot draw a background from an empty matrix");
  if (max_rows == 0) fail(ErrorKind::Argument, "background needs at least one row");
  Rng rng(seed);
  auto perm = rng.shuffle(x.rows());
  perm.resize(std::min(max_rows, perm.size()));
  return x.select_rows(perm);
}

std::vector<Explanation> explain_model(const MlpModel& model, const Matrix& background,
                                       const Matrix& inputs, const Matrix& raw_values,
                                       const std::vector<std::string>& feature_names,
                                       const std::vector<std::string>& class_names,
                                       const KernelShapConfig& cfg) {
  if (inputs.rows() == 0) fail(ErrorKind::Argument, "nothing to explain");
  if (raw_values.rows() != inputs.rows() || raw_values.cols() != inputs.cols()) {
    fail(ErrorKind::Dimension, "raw values " + raw_values.shape() + " do not match inputs " +
                                   inputs.shape());
  }
  if (feature_names.size() != inputs.cols()) {
    fail(ErrorKind::Dimension, "feature names do not match input columns");
  }
  if (class_names.size() != model.n_classes) {
    fail(ErrorKind::Dimension, "class names do not match model outputs");
  }
  const ModelFn fn = [&model](const Matrix& rows) { return forward(model, rows); };

  std::vector<Explanation> out(model.n_classes);
  for (std::size_t c = 0; c < model.n_classes; ++c) {
    out[c].phi = Matrix(inputs.rows(), inputs.cols());
    out[c].feature_values = raw_values;
    out[c].feature_names = feature_names;
    out[c].target_class = c;
    out[c].target_name = class_names[c];
    out[c].predictions.resize(inputs.rows());
  }
  for (std::size_t i = 0; i < inputs.rows(); ++i) {
    KernelShapConfig per_sample = cfg;
    per_sample.seed = child_seed(cfg.seed, i);
    const auto values = kernel_shap(fn, background, inputs.row(i), per_sample);
    for (std::size_t c = 0; c < model.n_classes; ++c) {
      for (std::size_t j = 0; j < inputs.cols(); ++j) out[c].phi(i, j) = values.phi(c, j);
      out[c].base_value = values.base_value[c];
      out[c].predictions[i] = values.prediction[c];
    }
  }
  return out;
}

std::vector<ImportanceEntry> global_importance(const Explanation& expl) {
  if (expl.n_samples() == 0) fail(ErrorKind::Argument, "global_importance of an empty explanation");
  std::vector<ImportanceEntry> out(expl.n_features());
  for (std::size_t j = 0; j < expl.n_features(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < expl.n_samples(); ++i) sum += std::abs(expl.phi(i, j));
    out[j].feature = j;
    out[j].name = j < expl.feature_names.size() ? expl.feature_names[j] : std::to_string(j);
    out[j].mean_abs_phi = sum / static_cast<double>(expl.n_samples());
  }
  std::stable_sort(out.begin(), out.end(), [](const ImportanceEntry& a, const ImportanceEntry& b) {
    return a.mean_abs_phi > b.mean_abs_phi;
  });
  return out;
}

ForceData force_data(const Explanation& expl, std::size_t sample) {
  if (sample >= expl.n_samples()) {
    fail(ErrorKind::Argument, "sample " + std::to_string(sample) + " out of range (" +
                                  std::to_string(expl.n_samples()) + " explained)");
  }
  ForceData out;
  out.target = expl.target_name;
  out.sample = sample;
  out.base_value = expl.base_value;
  out.prediction = expl.predictions[sample];
  for (std::size_t j = 0; j < expl.n_features(); ++j) {
    ForceStripe s;
    s.feature = j;
    s.name = expl.feature_names[j];
    s.phi = expl.phi(sample, j);
    s.raw_value = expl.feature_values(sample, j);
    s.sign = s.phi > 0.0 ? 1 : (s.phi < 0.0 ? -1 : 0);
    out.stripes.push_back(std::move(s));
  }
  std::stable_sort(out.stripes.begin(), out.stripes.end(),
                   [](const ForceStripe& a, const ForceStripe& b) {
                     return std::abs(a.phi) > std::abs(b.phi);
                   });
  return out;
}

std::vector<double> normalized_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<double> out(n, 0.5);
  if (n < 2) return out;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  for (std::size_t start = 0; start < n;) {
    std::size_t stop = start + 1;
    while (stop < n && values[order[stop]] == values[order[start]]) ++stop;
    const double rank = 0.5 * static_cast<double>(start + stop - 1);
    for (std::size_t k = start; k < stop; ++k) out[order[k]] = rank / static_cast<double>(n - 1);
    start = stop;
  }
  return out;
}

std::vector<BeeswarmSeries> beeswarm_data(const Explanation& expl) {
  std::vector<BeeswarmSeries> out;
  for (const auto& entry : global_importance(expl)) {
    BeeswarmSeries s;
    s.feature = entry.feature;
    s.name = entry.name;
    s.phi = expl.phi.column(entry.feature);
    s.value_rank = normalized_ranks(expl.feature_values.column(entry.feature));
    out.push_back(std::move(s));
  }
  return out;
}

DependenceData dependence_data(const Explanation& expl, std::size_t feature) {
  if (feature >= expl.n_features()) {
    fail(ErrorKind::Argument, "feature " + std::to_string(feature) + " out of range (" +
                                  std::to_string(expl.n_features()) + " features)");
  }
  DependenceData out;
  out.feature = feature;
  out.name = expl.feature_names[feature];
  out.target = expl.target_name;
  out.raw_value = expl.feature_values.column(feature);
  out.phi = expl.phi.column(feature);
  return out;
}

}  // namespace idslab
