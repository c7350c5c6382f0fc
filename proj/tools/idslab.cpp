// Command-line entry point: run, synth, metrics-check, explain-only.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "idslab/csv.hpp"
#include "idslab/error.hpp"
#include "idslab/metrics.hpp"
#include "idslab/pipeline.hpp"
#include "idslab/serialize.hpp"
#include "idslab/synth.hpp"

namespace fs = std::filesystem;
using namespace idslab;

namespace {

/// A synth spec given inline ("{...}") or as a file path.
SynthSpec load_synth_spec(const std::string& arg) {
  const bool inline_json = !arg.empty() && arg.front() == '{';
  const std::string text = inline_json ? arg : read_text(arg);
  try {
    return synth_spec_from_json(parse_json(text, inline_json ? "--synth-spec" : arg));
  } catch (const Error& e) {
    fail(ErrorKind::Config, e.what());
  }
}

int report_error(const Error& e) {
  std::cerr << "idslab: " << to_string(e.kind()) << ": " << e.what() << "\n";
  return exit_code(e.kind());
}

struct RunFlags {
  std::string config;
  std::string data;
  std::string synth_spec;
  std::vector<std::string> labels;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> max_features;
  bool no_ffs = false;
};

int cmd_run(const RunFlags& f) {
  RunConfig cfg;
  if (!f.config.empty()) {
    const std::string text = read_text(f.config);
    try {
      cfg = run_config_from_json(parse_json(text, f.config));
    } catch (const Error& e) {
      fail(ErrorKind::Config, e.what());
    }
  }
  if (!f.data.empty() && !f.synth_spec.empty()) {
    fail(ErrorKind::Config, "--data and --synth-spec are mutually exclusive");
  }
  if (!f.data.empty()) {
    cfg.data_path = f.data;
    cfg.synth.reset();
  }
  if (!f.synth_spec.empty()) {
    cfg.synth = load_synth_spec(f.synth_spec);
    cfg.data_path.reset();
  }
  if (!f.labels.empty()) cfg.labels = f.labels;
  if (f.seed) cfg.seed = *f.seed;
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.max_features) cfg.ffs.max_features = *f.max_features;
  if (f.no_ffs) cfg.run_ffs = false;
  cfg.validate();

  const RunReport report = run_experiment(cfg);
  const fs::path report_path = fs::path(cfg.out_dir) / "report.json";
  if (!report.ok) {
    std::cerr << "idslab: run failed in stage '" << report.failed_stage << "'";
    if (!report.failed_prong.empty()) std::cerr << " (" << report.failed_prong << ")";
    std::cerr << ": " << report.error_message << "\n";
    std::cerr << "idslab: partial report written to " << report_path.string() << "\n";
    return exit_code(report.error_kind.value_or(ErrorKind::Numeric));
  }
  for (const auto& prong : report.canonical["prongs"]) {
    const auto& stage = prong["post_ffs"].is_null() ? prong["pre_ffs"] : prong["post_ffs"];
    std::cout << prong["label"].get<std::string>() << ": accuracy "
              << format_2dp(stage["report"]["accuracy"].get<double>()) << " on "
              << stage["features"].size() << " feature(s)\n";
  }
  std::cout << report.artifacts.size() << " artifacts, report at " << report_path.string() << "\n";
  return 0;
}

int cmd_synth(const std::string& spec_arg, std::optional<std::uint64_t> seed, const std::string& out) {
  SynthSpec spec = spec_arg.empty() ? SynthSpec{} : load_synth_spec(spec_arg);
  if (seed) spec.seed = *seed;
  const SynthData data = synthesize(spec);
  const fs::path dir(out.empty() ? "." : out);
  fs::create_directories(dir);
  save_csv(data.table, dir / "data.csv");
  const auto names = synthetic_feature_names(spec.n_features);
  Json truth;
  truth["spec"] = to_json(spec);
  truth["informative"] = data.informative;
  Json informative_names = Json::array();
  for (auto i : data.informative) informative_names.push_back(names[i]);
  truth["informative_names"] = informative_names;
  truth["constant_features"] = spec.constant_features;
  truth["label_columns"] = spec.class_counts.size() == 3 ? Json{"label2", "label3"} : Json{"label2"};
  truth["codec"] = to_json(data.codec);
  write_text(dir / "ground_truth.json", dump(truth));
  std::cout << "wrote " << (dir / "data.csv").string() << " (" << data.table.row_count()
            << " rows) and " << (dir / "ground_truth.json").string() << "\n";
  return 0;
}

int cmd_metrics_check(const std::string& input, bool as_json) {
  std::string text;
  if (input == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else if (!input.empty() && (input.front() == '[' || input.front() == '{')) {
    text = input;
  } else {
    text = read_text(input);
  }
  const ConfusionMatrix cm = confusion_from_json(text);
  const ClassReport rep = report(cm);
  if (as_json) {
    std::cout << dump(Json{{"confusion", to_json(cm)}, {"report", to_json(rep)}});
  } else {
    std::cout << format_confusion(cm) << "\n" << format_report(rep);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"idslab: MLP intrusion-detection experiments with feature selection and SHAP"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Train, select, evaluate and explain; write the report bundle");
  run->add_option("--config", run_flags.config, "JSON run configuration");
  run->add_option("--data", run_flags.data, "CSV dataset");
  run->add_option("--synth-spec", run_flags.synth_spec, "Synthetic data spec (file or inline JSON)");
  run->add_option("--label", run_flags.labels, "Label column, repeatable: label2, label3");
  run->add_option("--seed", run_flags.seed, "Run seed");
  run->add_option("--out", run_flags.out, "Output directory");
  run->add_option("--max-features", run_flags.max_features, "Feature selection cap");
  run->add_flag("--no-ffs", run_flags.no_ffs, "Skip forward feature selection");

  std::string synth_spec, synth_out;
  std::optional<std::uint64_t> synth_seed;
  auto* synth = app.add_subcommand("synth", "Write a synthetic CSV and its ground-truth sidecar");
  synth->add_option("--synth-spec", synth_spec, "Synthetic data spec (file or inline JSON)");
  synth->add_option("--seed", synth_seed, "Generator seed (overrides the spec)");
  synth->add_option("--out", synth_out, "Output directory");

  std::string metrics_input;
  bool metrics_json = false;
  auto* metrics = app.add_subcommand("metrics-check", "Classification report from a confusion matrix");
  metrics->add_option("input", metrics_input, "JSON file, inline JSON, or - for stdin")->required();
  metrics->add_flag("--json", metrics_json, "Print JSON instead of a text table");

  ExplainOnlyConfig ecfg;
  auto* explain = app.add_subcommand("explain-only", "Explain a saved model on a CSV");
  explain->add_option("--model", ecfg.model_path, "model.json from a run")->required();
  explain->add_option("--data", ecfg.data_path, "CSV with the model's feature columns")->required();
  explain->add_option("--out", ecfg.out_dir, "Output directory");
  explain->add_option("--rows", ecfg.explain_rows, "Rows to explain");
  explain->add_option("--background", ecfg.background_rows, "Background rows");
  explain->add_option("--seed", ecfg.seed, "Seed for background and coalition sampling");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags);
    if (synth->parsed()) return cmd_synth(synth_spec, synth_seed, synth_out);
    if (metrics->parsed()) return cmd_metrics_check(metrics_input, metrics_json);
    if (explain->parsed()) {
      if (ecfg.explain_rows == 0 || ecfg.background_rows == 0) {
        fail(ErrorKind::Config, "--rows and --background must be positive");
      }
      for (const auto& path : explain_only(ecfg)) std::cout << path << "\n";
      return 0;
    }
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "idslab: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
