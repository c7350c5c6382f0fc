#include "idslab/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "idslab/correlation.hpp"
#include "idslab/csv.hpp"
#include "idslab/dataset.hpp"
#include "idslab/metrics.hpp"
#include "idslab/model_io.hpp"
#include "idslab/preprocess.hpp"
#include "idslab/render.hpp"
#include "idslab/rng.hpp"

namespace idslab {

namespace fs = std::filesystem;

namespace {

// Child streams of the run seed.
constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kInitStream = 2;
constexpr std::uint64_t kTrainStream = 3;
constexpr std::uint64_t kFfsStream = 4;
constexpr std::uint64_t kBackgroundStream = 5;
constexpr std::uint64_t kKernelStream = 6;

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

std::vector<int> pick(const std::vector<int>& y, const std::vector<std::size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(y[r]);
  return out;
}

std::vector<std::string> pick(const std::vector<std::string>& names,
                              const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(names[i]);
  return out;
}

std::string file_stem(const std::string& name) {
  std::string out;
  for (char c : name) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
  }
  return out;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

/// Records every file written below a root directory.
class ArtifactWriter {
 public:
  ArtifactWriter(fs::path root, std::vector<std::string>& manifest)
      : root_(std::move(root)), manifest_(manifest) {}

  void write(const std::string& relative, const std::string& content) {
    const fs::path path = root_ / relative;
    write_text(path, content);
    manifest_.push_back(relative);
  }

 private:
  fs::path root_;
  std::vector<std::string>& manifest_;
};

class StageClock {
 public:
  StageClock(RunReport& report, std::string prong) : report_(report), prong_(std::move(prong)) {}

  void begin(const char* stage) {
    finish();
    stage_ = stage;
    start_ = std::chrono::steady_clock::now();
  }

  void finish() {
    if (stage_.empty()) return;
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
    report_.timings.push_back({prong_, stage_, dt.count()});
    stage_.clear();
  }

  const std::string& stage() const noexcept { return stage_; }

 private:
  RunReport& report_;
  std::string prong_;
  std::string stage_;
  std::chrono::steady_clock::time_point start_;
};

Json model_summary(const MlpModel& model, const ConfusionMatrix& cm, const ClassReport& rep) {
  Json j;
  j["features"] = model.metadata.feature_names;
  j["parameters"] = model.parameter_count();
  j["epochs"] = model.history.size();
  j["final_loss"] = model.history.empty() ? 0.0 : model.history.back();
  j["confusion"] = to_json(cm);
  j["report"] = to_json(rep);
  return j;
}

/// The class whose attributions drive the summary figures: the single
/// attack class of a binary task, otherwise the class predicted most often.
std::size_t figure_class(const std::vector<std::string>& classes, const std::vector<int>& predicted) {
  if (classes.size() == 2) {
    std::vector<std::size_t> attack;
    for (std::size_t c = 0; c < 2; ++c) {
      if (lower(classes[c]).find("attack") != std::string::npos) attack.push_back(c);
    }
    if (attack.size() == 1) return attack.front();
  }
  std::vector<std::size_t> counts(classes.size(), 0);
  for (int p : predicted) ++counts[static_cast<std::size_t>(p)];
  return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

/// Explains `inputs` with `model`, writes explanations.json and the SHAP
/// figure family into `dir`.
Json explain_and_render(const MlpModel& model, const Matrix& background, const Matrix& inputs,
                        const Matrix& raw, const std::vector<std::size_t>& row_ids,
                        const KernelShapConfig& kcfg, std::size_t dependence_plots,
                        ArtifactWriter& out, const std::string& dir, const std::string& context,
                        StageClock& clock) {
  const std::string suffix = context.empty() ? "" : " " + context;
  const auto& names = model.metadata.feature_names;
  const auto& classes = model.metadata.class_names;
  const auto expl = explain_model(model, background, inputs, raw, names, classes, kcfg);
  const auto predicted = predict(model, inputs);
  const std::size_t target = figure_class(classes, predicted);
  const Explanation& main = expl[target];

  double local_error = 0.0;
  for (const auto& e : expl) {
    for (std::size_t i = 0; i < e.n_samples(); ++i) {
      double sum = e.base_value;
      for (std::size_t j = 0; j < e.n_features(); ++j) sum += e.phi(i, j);
      local_error = std::max(local_error, std::abs(sum - e.predictions[i]));
    }
  }

  clock.begin("render");
  Json body;
  body["rows"] = row_ids;
  body["figure_class"] = classes[target];
  Json per_class = Json::array();
  for (const auto& e : expl) per_class.push_back(to_json(e));
  body["classes"] = per_class;
  out.write(dir + "explanations.json", dump(body));

  const auto importance = global_importance(main);
  Chart bars{"Mean |SHAP| (" + main.target_name + ")" + suffix, importance};
  out.write(dir + "importance.svg", render_svg(bars));

  const std::size_t force_class = static_cast<std::size_t>(predicted.front());
  Chart force{"Force plot, sample " + std::to_string(row_ids.front()) + " (" +
                  classes[force_class] + ")" + suffix,
              force_data(expl[force_class], 0)};
  out.write(dir + "force.svg", render_svg(force));

  Chart swarm{"SHAP values (" + main.target_name + ")" + suffix, beeswarm_data(main)};
  out.write(dir + "beeswarm.svg", render_svg(swarm));

  const std::size_t n_dep = std::min(dependence_plots, importance.size());
  for (std::size_t k = 0; k < n_dep; ++k) {
    const auto& entry = importance[k];
    Chart dep{"Dependence: " + entry.name + " (" + main.target_name + ")" + suffix,
              dependence_data(main, entry.feature)};
    out.write(dir + "dependence_" + std::to_string(k + 1) + "_" + file_stem(entry.name) + ".svg",
              render_svg(dep));
  }

  Json summary;
  summary["rows"] = row_ids.size();
  summary["figure_class"] = classes[target];
  summary["base_value"] = main.base_value;
  Json imp = Json::array();
  for (const auto& e : importance) imp.push_back({{"feature", e.name}, {"mean_abs_phi", e.mean_abs_phi}});
  summary["importance"] = imp;
  summary["local_accuracy_max_error"] = local_error;
  return summary;
}

struct LoadedData {
  RawTable table;
  std::vector<std::string> features;
  Json source;
  Json ground_truth;
};

bool is_label_column(const std::string& name) {
  try {
    scheme_for_column(name);
    return true;
  } catch (const Error&) {
    return false;
  }
}

/// The default candidates when the table carries any of them (a missing one
/// is then a schema error at encoding); otherwise every non-label column.
std::vector<std::string> csv_candidates(const RawTable& table) {
  const auto& defaults = default_candidate_features();
  for (const auto& name : defaults) {
    if (table.find_column(name) != RawTable::npos) return defaults;
  }
  std::vector<std::string> out;
  for (const auto& name : table.header) {
    if (!is_label_column(name)) out.push_back(name);
  }
  return out;
}

LoadedData load_data(const RunConfig& cfg) {
  LoadedData d;
  if (cfg.data_path) {
    d.table = load_csv(*cfg.data_path, cfg.delimiter);
    d.features = cfg.features.empty() ? csv_candidates(d.table) : cfg.features;
    d.source = {{"kind", "csv"}, {"file", fs::path(*cfg.data_path).filename().string()},
                {"rows", d.table.row_count()}};
  } else {
    auto synth = synthesize(*cfg.synth);
    d.table = std::move(synth.table);
    d.features = cfg.features.empty() ? synthetic_feature_names(cfg.synth->n_features) : cfg.features;
    d.source = {{"kind", "synthetic"}, {"spec", to_json(*cfg.synth)}, {"rows", d.table.row_count()}};
    d.ground_truth = pick(synthetic_feature_names(cfg.synth->n_features), synth.informative);
    d.source["informative"] = d.ground_truth;
  }
  return d;
}

void run_prong(const RunConfig& cfg, const LoadedData& data, const std::string& label,
               Json& prong, ArtifactWriter& out, StageClock& clock) {
  const std::string dir = label + "/";
  prong["label"] = label;

  clock.begin("encode");
  auto [ds, codec] = build_dataset(data.table, data.features, label);
  prong["codec"] = to_json(codec);
  prong["features"] = ds.feature_names;
  prong["class_counts"] = ds.class_counts();

  clock.begin("split");
  Rng split_rng(child_seed(cfg.seed, kSplitStream));
  const auto parts = split(ds.n_samples(), cfg.train_fraction, split_rng);
  prong["split"] = {{"train", parts.train.size()},
                    {"test", parts.test.size()},
                    {"train_fraction", parts.train_fraction}};

  clock.begin("scale");
  const auto scaler = fit_scaler(ds.x, parts.train);
  const Matrix x_scaled = apply_scaler(scaler, ds.x);
  const Matrix x_train = x_scaled.select_rows(parts.train);
  const Matrix x_test = x_scaled.select_rows(parts.test);
  const auto y_train = pick(ds.y, parts.train);
  const auto y_test = pick(ds.y, parts.test);
  std::vector<std::string> zero_variance;
  for (std::size_t j = 0; j < scaler.size(); ++j) {
    if (scaler.zero_variance[j]) zero_variance.push_back(ds.feature_names[j]);
  }
  prong["zero_variance_features"] = zero_variance;

  auto fit_model = [&](const std::vector<std::size_t>& cols) {
    MlpConfig mcfg = cfg.mlp;
    mcfg.init_seed = child_seed(cfg.seed, kInitStream);
    Rng init_rng(mcfg.init_seed);
    Rng train_rng(child_seed(cfg.seed, kTrainStream));
    MlpModel model = init_model(mcfg, cols.size(), ds.n_classes(), init_rng);
    model = train(std::move(model), x_train.select_cols(cols), y_train, mcfg, train_rng, ds.classes);
    model.metadata.feature_names = pick(ds.feature_names, cols);
    model.metadata.class_names = ds.classes;
    model.metadata.label_column = label;
    for (auto c : cols) {
      model.metadata.scaler_mean.push_back(scaler.mean[c]);
      model.metadata.scaler_std.push_back(scaler.std[c]);
      model.metadata.scaler_zero_variance.push_back(scaler.zero_variance[c]);
    }
    return model;
  };
  auto evaluate = [&](const MlpModel& model, const std::vector<std::size_t>& cols) {
    const auto predicted = predict(model, x_test.select_cols(cols));
    auto cm = confusion(y_test, predicted, ds.n_classes(), ds.classes);
    auto rep = report(cm);
    return std::make_pair(cm, rep);
  };

  clock.begin("train");
  const auto all_cols = iota_indices(ds.n_features());
  const MlpModel full = fit_model(all_cols);

  clock.begin("evaluate");
  const auto [cm_pre, rep_pre] = evaluate(full, all_cols);
  prong["pre_ffs"] = model_summary(full, cm_pre, rep_pre);
  out.write(dir + (cfg.run_ffs ? "model_full.json" : "model.json"), serialize_model(full));
  out.write(dir + "confusion_pre.svg",
            render_svg(Chart{"Confusion matrix, " + label + ", all candidates", cm_pre}));

  std::vector<std::size_t> selected = all_cols;
  const MlpModel* final_model = &full;
  MlpModel reduced;
  prong["ffs"] = nullptr;
  prong["post_ffs"] = nullptr;
  if (cfg.run_ffs) {
    clock.begin("select");
    FfsConfig fcfg = cfg.ffs;
    fcfg.seed = child_seed(cfg.seed, kFfsStream);
    MlpConfig inner = cfg.mlp;
    if (!cfg.ffs_hidden_layers.empty()) inner.hidden_layers = cfg.ffs_hidden_layers;
    inner.max_epochs = fcfg.inner_max_epochs;
    const std::uint64_t inner_seed = fcfg.seed;
    const auto& classes = ds.classes;
    const std::size_t k = ds.n_classes();
    FitPredict fit_predict = [inner, inner_seed, k, &classes](const Matrix& xf,
                                                             std::span<const int> yf,
                                                             const Matrix& xe, std::size_t fold) {
      Rng init_rng(child_seed(inner_seed, 2 * fold + 1));
      Rng train_rng(child_seed(inner_seed, 2 * fold + 2));
      MlpModel m = init_model(inner, xf.cols(), k, init_rng);
      m = train(std::move(m), xf, yf, inner, train_rng, classes);
      return predict(m, xe);
    };
    const FfsResult ffs = forward_select(x_train, y_train, all_cols, fcfg, fit_predict);
    prong["ffs"] = to_json(ffs, ds.feature_names);
    out.write(dir + "ffs.json", dump(prong["ffs"]));
    if (ffs.selected.empty()) {
      fail(ErrorKind::Training, "forward selection accepted no feature above the majority-class rate");
    }

    clock.begin("retrain");
    selected = ffs.selected;
    reduced = fit_model(selected);
    const auto [cm_post, rep_post] = evaluate(reduced, selected);
    prong["post_ffs"] = model_summary(reduced, cm_post, rep_post);
    out.write(dir + "model.json", serialize_model(reduced));
    out.write(dir + "confusion_post.svg",
              render_svg(Chart{"Confusion matrix, " + label + ", selected features", cm_post}));
    final_model = &reduced;
  }

  clock.begin("explain");
  std::vector<std::size_t> rows(parts.test.begin(),
                                parts.test.begin() + static_cast<std::ptrdiff_t>(std::min(
                                                         cfg.explain_rows, parts.test.size())));
  const Matrix x_sel_train = x_train.select_cols(selected);
  const Matrix background =
      select_background(x_sel_train, cfg.background_rows, child_seed(cfg.seed, kBackgroundStream));
  const Matrix inputs = x_scaled.select_rows(rows).select_cols(selected);
  const Matrix raw = ds.x.select_rows(rows).select_cols(selected);
  KernelShapConfig kcfg;
  kcfg.max_coalitions = cfg.max_coalitions;
  kcfg.seed = child_seed(cfg.seed, kKernelStream);
  prong["explanation"] =
      explain_and_render(*final_model, background, inputs, raw, rows, kcfg, cfg.dependence_plots,
                         out, dir, "[" + label + "]", clock);

  clock.begin("correlate");
  const Matrix raw_train = ds.x.select_rows(parts.train);
  const auto corr_all = correlation(raw_train, ds.feature_names);
  const auto corr_sel = correlation(raw_train.select_cols(selected), pick(ds.feature_names, selected));
  out.write(dir + "correlation.json",
            dump(Json{{"candidates", to_json(corr_all)}, {"selected", to_json(corr_sel)}}));
  out.write(dir + "correlation_candidates.svg",
            render_svg(Chart{"Feature correlation, candidates [" + label + "]", corr_all}));
  if (selected.size() >= 1) {
    out.write(dir + "correlation_selected.svg",
              render_svg(Chart{"Feature correlation, selected [" + label + "]", corr_sel}));
  }
  clock.finish();
}

}  // namespace

void RunConfig::validate() const {
  if (data_path.has_value() == synth.has_value()) {
    fail(ErrorKind::Config, "exactly one data source (a CSV path or a synth spec) is required");
  }
  if (labels.empty()) fail(ErrorKind::Config, "at least one label column is required");
  for (const auto& l : labels) {
    try {
      scheme_for_column(l);
    } catch (const Error& e) {
      fail(ErrorKind::Config, e.what());
    }
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      if (labels[i] == labels[j]) fail(ErrorKind::Config, "label '" + labels[i] + "' given twice");
    }
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    fail(ErrorKind::Config, "train_fraction must lie in (0, 1)");
  }
  if (background_rows == 0) fail(ErrorKind::Config, "background_rows must be positive");
  if (explain_rows == 0) fail(ErrorKind::Config, "explain_rows must be positive");
  if (max_coalitions < 2) fail(ErrorKind::Config, "max_coalitions must be at least 2");
  if (out_dir.empty()) fail(ErrorKind::Config, "output directory is empty");
  try {
    mlp.validate();
    ffs.validate();
    MlpConfig inner = mlp;
    if (!ffs_hidden_layers.empty()) inner.hidden_layers = ffs_hidden_layers;
    inner.validate();
  } catch (const Error& e) {
    fail(ErrorKind::Config, e.what());
  }
}

RunConfig run_config_from_json(const Json& j) {
  static constexpr const char* kKeys[] = {
      "data", "synth", "delimiter", "labels", "features", "seed", "train_fraction", "mlp",
      "ffs_hidden_layers", "ffs", "run_ffs", "background_rows", "explain_rows", "max_coalitions",
      "dependence_plots", "out"};
  if (!j.is_object()) fail(ErrorKind::Config, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      fail(ErrorKind::Config, "unknown config key '" + key + "'");
    }
  }
  RunConfig cfg;
  auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      field = j.at(key).get<std::decay_t<decltype(field)>>();
    } catch (const nlohmann::json::exception&) {
      fail(ErrorKind::Config, std::string("config key '") + key + "' has the wrong type");
    }
  };
  if (j.contains("data")) {
    std::string path;
    get("data", path);
    cfg.data_path = path;
  }
  if (j.contains("synth")) cfg.synth = synth_spec_from_json(j.at("synth"));
  if (j.contains("delimiter")) {
    std::string d;
    get("delimiter", d);
    if (d.size() != 1) fail(ErrorKind::Config, "delimiter must be a single character");
    cfg.delimiter = d.front();
  }
  get("labels", cfg.labels);
  get("features", cfg.features);
  get("seed", cfg.seed);
  get("train_fraction", cfg.train_fraction);
  if (j.contains("mlp")) cfg.mlp = mlp_config_from_json(j.at("mlp"));
  get("ffs_hidden_layers", cfg.ffs_hidden_layers);
  if (j.contains("ffs")) cfg.ffs = ffs_config_from_json(j.at("ffs"));
  get("run_ffs", cfg.run_ffs);
  get("background_rows", cfg.background_rows);
  get("explain_rows", cfg.explain_rows);
  get("max_coalitions", cfg.max_coalitions);
  get("dependence_plots", cfg.dependence_plots);
  get("out", cfg.out_dir);
  return cfg;
}

Json to_json(const RunConfig& cfg) {
  Json j;
  if (cfg.data_path) j["data"] = fs::path(*cfg.data_path).filename().string();
  if (cfg.synth) j["synth"] = to_json(*cfg.synth);
  j["delimiter"] = std::string(1, cfg.delimiter);
  j["labels"] = cfg.labels;
  j["features"] = cfg.features;
  j["seed"] = cfg.seed;
  j["train_fraction"] = cfg.train_fraction;
  MlpConfig mlp = cfg.mlp;
  mlp.init_seed = child_seed(cfg.seed, kInitStream);
  j["mlp"] = to_json(mlp);
  j["ffs_hidden_layers"] = cfg.ffs_hidden_layers;
  FfsConfig ffs = cfg.ffs;
  ffs.seed = child_seed(cfg.seed, kFfsStream);
  j["ffs"] = to_json(ffs);
  j["run_ffs"] = cfg.run_ffs;
  j["background_rows"] = cfg.background_rows;
  j["explain_rows"] = cfg.explain_rows;
  j["max_coalitions"] = cfg.max_coalitions;
  j["dependence_plots"] = cfg.dependence_plots;
  return j;
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Argument:
      return 2;
    case ErrorKind::Parse:
    case ErrorKind::Schema:
    case ErrorKind::Codec:
    case ErrorKind::Format:
    case ErrorKind::Io:
      return 3;
    case ErrorKind::Dimension:
    case ErrorKind::Training:
    case ErrorKind::Numeric:
    case ErrorKind::Capacity:
      return 4;
  }
  return 4;
}

RunReport run_experiment(const RunConfig& cfg) {
  RunReport report;
  const fs::path root(cfg.out_dir);
  fs::create_directories(root);
  ArtifactWriter out(root, report.artifacts);

  Json prongs = Json::array();
  report.canonical["config"] = to_json(cfg);
  std::string prong_name;
  StageClock* active = nullptr;
  Json current;
  try {
    StageClock load_clock(report, "");
    active = &load_clock;
    load_clock.begin("load");
    const LoadedData data = load_data(cfg);
    load_clock.finish();
    report.canonical["data"] = data.source;
    if (cfg.synth) {
      out.write("data.csv", format_csv(data.table, cfg.delimiter));
    }
    for (const auto& label : cfg.labels) {
      prong_name = label;
      StageClock clock(report, label);
      active = &clock;
      current = Json::object();
      run_prong(cfg, data, label, current, out, clock);
      prongs.push_back(current);
      current = Json();
    }
    active = nullptr;
    report.ok = true;
  } catch (const std::exception& e) {
    report.ok = false;
    report.failed_prong = prong_name;
    report.failed_stage = active != nullptr ? active->stage() : "write";
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
      report.error_kind = err->kind();
    } else if (dynamic_cast<const fs::filesystem_error*>(&e) != nullptr) {
      report.error_kind = ErrorKind::Io;
    } else {
      report.error_kind = ErrorKind::Numeric;
    }
    report.error_message = e.what();
    if (!current.is_null() && !current.empty()) {
      current["status"] = "failed";
      prongs.push_back(current);
    }
  }
  report.canonical["prongs"] = prongs;
  report.canonical["artifacts"] = report.artifacts;
  write_text(root / "report.json", dump(report_json(report, root)));
  return report;
}

Json report_json(const RunReport& report, const fs::path& out_dir) {
  Json j;
  j["status"] = report.ok ? "ok" : "failed";
  if (report.ok) {
    j["error"] = nullptr;
  } else {
    j["error"] = {{"stage", report.failed_stage},
                  {"prong", report.failed_prong},
                  {"kind", report.error_kind ? to_string(*report.error_kind) : "unknown"},
                  {"message", report.error_message}};
  }
  j["canonical"] = report.canonical;
  Json timings = Json::array();
  for (const auto& t : report.timings) {
    timings.push_back({{"prong", t.prong}, {"stage", t.stage}, {"seconds", t.seconds}});
  }
  j["timings"] = timings;
  std::error_code ec;
  const fs::path abs = fs::absolute(out_dir, ec);
  j["paths"] = {{"out_dir", ec ? out_dir.string() : abs.lexically_normal().string()}};
  return j;
}

std::vector<std::string> explain_only(const ExplainOnlyConfig& cfg) {
  const MlpModel model = load_model(cfg.model_path);
  const auto& meta = model.metadata;
  if (meta.feature_names.size() != model.n_inputs || meta.class_names.size() != model.n_classes ||
      meta.scaler_mean.size() != model.n_inputs) {
    fail(ErrorKind::Format, "model file lacks feature, class or scaler metadata");
  }
  const RawTable table = load_csv(cfg.data_path, cfg.delimiter);
  if (table.row_count() == 0) fail(ErrorKind::Schema, "no data rows in " + cfg.data_path);

  Matrix raw(table.row_count(), meta.feature_names.size());
  for (std::size_t j = 0; j < meta.feature_names.size(); ++j) {
    const auto col = table.find_column(meta.feature_names[j]);
    if (col == RawTable::npos) {
      fail(ErrorKind::Schema, "column '" + meta.feature_names[j] + "' missing from " + cfg.data_path);
    }
    for (std::size_t r = 0; r < table.row_count(); ++r) {
      const auto v = parse_number(table.cells[r][col]);
      if (!v) {
        fail(ErrorKind::Parse, "row " + std::to_string(r + 1) + ", column '" +
                                   meta.feature_names[j] + "': not a number");
      }
      raw(r, j) = *v;
    }
  }
  ScalerParams scaler{meta.scaler_mean, meta.scaler_std, meta.scaler_zero_variance};
  const Matrix scaled = apply_scaler(scaler, raw);
  const Matrix background =
      select_background(scaled, cfg.background_rows, child_seed(cfg.seed, kBackgroundStream));
  const auto rows = iota_indices(std::min(cfg.explain_rows, raw.rows()));

  std::vector<std::string> manifest;
  fs::create_directories(cfg.out_dir);
  ArtifactWriter out(cfg.out_dir, manifest);
  RunReport scratch;
  StageClock clock(scratch, "");
  clock.begin("explain");
  KernelShapConfig kcfg;
  kcfg.max_coalitions = cfg.max_coalitions;
  kcfg.seed = child_seed(cfg.seed, kKernelStream);
  const Json summary = explain_and_render(model, background, scaled.select_rows(rows),
                                          raw.select_rows(rows), rows, kcfg, cfg.dependence_plots,
                                          out, "", "", clock);
  clock.finish();
  out.write("summary.json", dump(summary));
  return manifest;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorKind::Io, "cannot write " + path.string());
  f << text;
  if (!f) fail(ErrorKind::Io, "write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace idslab
