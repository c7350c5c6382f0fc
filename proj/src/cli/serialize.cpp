#include "idslab/serialize.hpp"

#include <algorithm>
#include <initializer_list>

#include "idslab/error.hpp"

namespace idslab {

namespace {

Json metric_row(const std::string& label, double p, double r, double f1, std::size_t support) {
  Json row;
  row["label"] = label;
  row["precision"] = p;
  row["recall"] = r;
  row["f1-score"] = f1;
  row["support"] = support;
  row["display"] = {{"precision", format_2dp(p)},
                    {"recall", format_2dp(r)},
                    {"f1-score", format_2dp(f1)},
                    {"support", std::to_string(support)}};
  return row;
}

void require_object(const Json& j, std::string_view what,
                    std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) fail(ErrorKind::Config, std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(ErrorKind::Config, "unknown key '" + key + "' in " + std::string(what));
    }
  }
}

template <typename T>
void read(const Json& j, const char* key, T& out, std::string_view what) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorKind::Config, std::string(what) + "." + key + " has the wrong type");
  }
}

}  // namespace

Json to_json(const ConfusionMatrix& cm) {
  Json j;
  j["classes"] = cm.class_names;
  j["counts"] = cm.counts;
  return j;
}

Json to_json(const ClassReport& r) {
  Json rows = Json::array();
  for (const auto& c : r.classes) {
    rows.push_back(metric_row(c.name, c.precision, c.recall, c.f1, c.support));
  }
  Json acc;
  acc["label"] = "accuracy";
  acc["f1-score"] = r.accuracy;
  acc["support"] = r.total;
  acc["display"] = {{"f1-score", format_2dp(r.accuracy)}, {"support", std::to_string(r.total)}};
  rows.push_back(acc);
  rows.push_back(metric_row("macro avg", r.macro_avg.precision, r.macro_avg.recall,
                            r.macro_avg.f1, r.macro_avg.support));
  rows.push_back(metric_row("weighted avg", r.weighted_avg.precision, r.weighted_avg.recall,
                            r.weighted_avg.f1, r.weighted_avg.support));
  Json zero = Json::array();
  for (const auto& c : r.classes) {
    if (c.precision_zero_division) zero.push_back(c.name + ": precision");
    if (c.recall_zero_division) zero.push_back(c.name + ": recall");
    if (c.f1_zero_division) zero.push_back(c.name + ": f1-score");
  }
  Json j;
  j["accuracy"] = r.accuracy;
  j["rows"] = rows;
  j["zero_division"] = zero;
  return j;
}

Json to_json(const FfsResult& result, const std::vector<std::string>& names) {
  auto name_of = [&](std::size_t idx) {
    return idx < names.size() ? names[idx] : std::to_string(idx);
  };
  Json j;
  j["baseline"] = result.baseline;
  j["selected"] = result.selected;
  Json selected_names = Json::array();
  for (auto idx : result.selected) selected_names.push_back(name_of(idx));
  j["selected_names"] = selected_names;
  j["trajectory"] = result.trajectory;
  Json rounds = Json::array();
  for (const auto& round : result.considered) {
    Json candidates = Json::array();
    for (std::size_t i = 0; i < round.candidates.size(); ++i) {
      candidates.push_back({{"feature", round.candidates[i]},
                            {"name", name_of(round.candidates[i])},
                            {"score", round.scores[i]}});
    }
    rounds.push_back(candidates);
  }
  j["rounds"] = rounds;
  return j;
}

Json to_json(const LabelCodec& codec) {
  Json j = Json::array();
  for (std::size_t c = 0; c < codec.size(); ++c) {
    j.push_back({{"code", c}, {"raw", codec.raw_values()[c]}, {"name", codec.display_names()[c]}});
  }
  return j;
}

Json to_json(const CorrelationMatrix& corr) {
  Json values = Json::array();
  for (std::size_t i = 0; i < corr.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < corr.size(); ++j) {
      if (corr.defined(i, j)) {
        row.push_back(corr.values(i, j));
      } else {
        row.push_back(nullptr);
      }
    }
    values.push_back(row);
  }
  Json j;
  j["features"] = corr.feature_names;
  j["values"] = values;
  return j;
}

Json to_json(const Explanation& expl) {
  Json j;
  j["target_class"] = expl.target_class;
  j["target"] = expl.target_name;
  j["base_value"] = expl.base_value;
  j["features"] = expl.feature_names;
  Json importance = Json::array();
  for (const auto& e : global_importance(expl)) {
    importance.push_back({{"feature", e.name}, {"mean_abs_phi", e.mean_abs_phi}});
  }
  j["importance"] = importance;
  Json samples = Json::array();
  for (std::size_t i = 0; i < expl.n_samples(); ++i) {
    const auto phi = expl.phi.row(i);
    const auto raw = expl.feature_values.row(i);
    samples.push_back({{"prediction", expl.predictions[i]},
                       {"phi", std::vector<double>(phi.begin(), phi.end())},
                       {"values", std::vector<double>(raw.begin(), raw.end())}});
  }
  j["samples"] = samples;
  return j;
}

Json to_json(const MlpConfig& cfg) {
  Json j;
  j["hidden_layers"] = cfg.hidden_layers;
  j["activation"] = to_string(cfg.activation);
  j["learning_rate"] = cfg.learning_rate;
  j["beta1"] = cfg.beta1;
  j["beta2"] = cfg.beta2;
  j["epsilon"] = cfg.epsilon;
  j["batch_size"] = cfg.batch_size;
  j["max_epochs"] = cfg.max_epochs;
  j["l2_penalty"] = cfg.l2_penalty;
  j["patience"] = cfg.patience;
  j["tolerance"] = cfg.tolerance;
  j["init_seed"] = cfg.init_seed;
  return j;
}

Json to_json(const FfsConfig& cfg) {
  Json j;
  j["max_features"] = cfg.max_features;
  j["min_improvement"] = cfg.min_improvement;
  j["folds"] = cfg.folds;
  j["scoring"] = cfg.scoring;
  j["seed"] = cfg.seed;
  j["inner_max_epochs"] = cfg.inner_max_epochs;
  j["threads"] = cfg.threads;
  return j;
}

Json to_json(const SynthSpec& spec) {
  Json j;
  j["class_counts"] = spec.class_counts;
  j["n_features"] = spec.n_features;
  j["n_informative"] = spec.n_informative;
  j["informative"] = spec.informative;
  j["constant_features"] = spec.constant_features;
  j["separation"] = spec.separation;
  j["obfuscation"] = {{"scale", spec.obfuscation.scale}, {"shift", spec.obfuscation.shift}};
  j["seed"] = spec.seed;
  return j;
}

MlpConfig mlp_config_from_json(const Json& j) {
  constexpr std::string_view what = "mlp";
  require_object(j, what,
                 {"hidden_layers", "activation", "learning_rate", "beta1", "beta2", "epsilon",
                  "batch_size", "max_epochs", "l2_penalty", "patience", "tolerance", "init_seed"});
  MlpConfig cfg;
  read(j, "hidden_layers", cfg.hidden_layers, what);
  if (j.contains("activation")) {
    std::string name;
    read(j, "activation", name, what);
    try {
      cfg.activation = activation_from_string(name);
    } catch (const Error& e) {
      fail(ErrorKind::Config, e.what());
    }
  }
  read(j, "learning_rate", cfg.learning_rate, what);
  read(j, "beta1", cfg.beta1, what);
  read(j, "beta2", cfg.beta2, what);
  read(j, "epsilon", cfg.epsilon, what);
  read(j, "batch_size", cfg.batch_size, what);
  read(j, "max_epochs", cfg.max_epochs, what);
  read(j, "l2_penalty", cfg.l2_penalty, what);
  read(j, "patience", cfg.patience, what);
  read(j, "tolerance", cfg.tolerance, what);
  read(j, "init_seed", cfg.init_seed, what);
  return cfg;
}

FfsConfig ffs_config_from_json(const Json& j) {
  constexpr std::string_view what = "ffs";
  require_object(j, what,
                 {"max_features", "min_improvement", "folds", "scoring", "seed",
                  "inner_max_epochs", "threads"});
  FfsConfig cfg;
  read(j, "max_features", cfg.max_features, what);
  read(j, "min_improvement", cfg.min_improvement, what);
  read(j, "folds", cfg.folds, what);
  read(j, "scoring", cfg.scoring, what);
  read(j, "seed", cfg.seed, what);
  read(j, "inner_max_epochs", cfg.inner_max_epochs, what);
  read(j, "threads", cfg.threads, what);
  return cfg;
}

SynthSpec synth_spec_from_json(const Json& j) {
  constexpr std::string_view what = "synth";
  require_object(j, what,
                 {"class_counts", "n_features", "n_informative", "informative",
                  "constant_features", "separation", "obfuscation", "seed"});
  SynthSpec spec;
  read(j, "class_counts", spec.class_counts, what);
  read(j, "n_features", spec.n_features, what);
  read(j, "n_informative", spec.n_informative, what);
  read(j, "informative", spec.informative, what);
  read(j, "constant_features", spec.constant_features, what);
  read(j, "separation", spec.separation, what);
  if (j.contains("obfuscation")) {
    const Json& o = j.at("obfuscation");
    require_object(o, "synth.obfuscation", {"scale", "shift"});
    read(o, "scale", spec.obfuscation.scale, "synth.obfuscation");
    read(o, "shift", spec.obfuscation.shift, "synth.obfuscation");
  }
  read(j, "seed", spec.seed, what);
  return spec;
}

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Format, "malformed JSON in " + std::string(what) + ": " + e.what());
  }
}

ConfusionMatrix confusion_from_json(std::string_view text) {
  const Json j = parse_json(text, "confusion matrix");
  const Json* counts = &j;
  std::vector<std::string> classes;
  if (j.is_object()) {
    if (!j.contains("counts")) fail(ErrorKind::Format, "confusion matrix object lacks \"counts\"");
    counts = &j.at("counts");
    if (j.contains("classes")) {
      if (!j.at("classes").is_array()) fail(ErrorKind::Format, "\"classes\" must be an array");
      for (const auto& c : j.at("classes")) {
        if (!c.is_string()) fail(ErrorKind::Format, "class names must be strings");
        classes.push_back(c.get<std::string>());
      }
    }
  }
  if (!counts->is_array() || counts->empty()) {
    fail(ErrorKind::Format, "confusion matrix must be a non-empty array of rows");
  }
  std::vector<std::vector<std::size_t>> rows;
  for (const auto& row : *counts) {
    if (!row.is_array()) fail(ErrorKind::Format, "confusion matrix rows must be arrays");
    std::vector<std::size_t> values;
    for (const auto& v : row) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        fail(ErrorKind::Format, "confusion counts must be non-negative integers, got " + v.dump());
      }
      values.push_back(v.get<std::size_t>());
    }
    rows.push_back(std::move(values));
  }
  try {
    return make_confusion(std::move(rows), std::move(classes));
  } catch (const Error& e) {
    fail(ErrorKind::Format, e.what());
  }
}

std::string dump(const Json& j) { return j.dump(1) + "\n"; }

}  // namespace idslab
