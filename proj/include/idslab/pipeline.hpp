#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "idslab/error.hpp"
#include "idslab/explain.hpp"
#include "idslab/ffs.hpp"
#include "idslab/mlp.hpp"
#include "idslab/serialize.hpp"
#include "idslab/synth.hpp"

namespace idslab {

struct RunConfig {
  /// Exactly one of `data_path` and `synth` is set.
  std::optional<std::string> data_path;
  std::optional<SynthSpec> synth;
  char delimiter = ',';
  /// One experiment prong per entry: "label2" and/or "label3".
  std::vector<std::string> labels{"label2"};
  /// Candidate columns. Empty means every synthetic feature, or the default
  /// candidate list for CSV input.
  std::vector<std::string> features;
  std::uint64_t seed = 7;
  double train_fraction = 0.8;
  MlpConfig mlp;
  /// Hidden layers of the networks trained inside the feature search; empty
  /// means the same layers as `mlp`.
  std::vector<std::size_t> ffs_hidden_layers;
  FfsConfig ffs;
  bool run_ffs = true;
  std::size_t background_rows = 100;
  /// Test rows explained per prong.
  std::size_t explain_rows = 100;
  std::size_t max_coalitions = 2048;
  /// Dependence plots emitted for the top-ranked features.
  std::size_t dependence_plots = 4;
  std::string out_dir = "out";

  void validate() const;
};

/// Reads a config file body. Unknown keys are config errors.
RunConfig run_config_from_json(const Json& j);
Json to_json(const RunConfig& cfg);

/// The pipeline stage names, in execution order.
inline constexpr const char* kStages[] = {"load",  "encode",  "split",   "scale",   "train",
                                          "evaluate", "select", "retrain", "explain", "correlate",
                                          "render", "write"};

struct StageTiming {
  std::string prong;
  std::string stage;
  double seconds = 0.0;
};

struct RunReport {
  bool ok = false;
  /// Set on failure.
  std::string failed_stage;
  std::string failed_prong;
  std::optional<ErrorKind> error_kind;
  std::string error_message;

  /// Deterministic content: config echo, per-prong results, manifest.
  Json canonical;
  /// Output-relative paths of every artifact written, in write order.
  std::vector<std::string> artifacts;
  std::vector<StageTiming> timings;
};

/// Runs every prong and writes the report bundle under cfg.out_dir. Stage
/// failures are captured in the returned report (and in report.json) rather
/// than thrown; errors writing the report itself propagate.
RunReport run_experiment(const RunConfig& cfg);

/// report.json body: {"status", "error", "canonical", "timings", "paths"}.
Json report_json(const RunReport& report, const std::filesystem::path& out_dir);

/// Process exit status for an error kind: 2 config, 3 data, 4 numeric.
int exit_code(ErrorKind kind) noexcept;

struct ExplainOnlyConfig {
  std::string model_path;
  std::string data_path;
  char delimiter = ',';
  std::size_t background_rows = 100;
  std::size_t explain_rows = 100;
  std::size_t max_coalitions = 2048;
  std::size_t dependence_plots = 4;
  std::uint64_t seed = 7;
  std::string out_dir = "out";
};

/// Rescales `data_path` with the model's stored scaler, explains its first
/// rows and writes explanations.json plus the explanation charts. Returns the
/// written artifact paths relative to out_dir.
std::vector<std::string> explain_only(const ExplainOnlyConfig& cfg);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace idslab
