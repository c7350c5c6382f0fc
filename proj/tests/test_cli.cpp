#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"

#include "idslab/error.hpp"
#include "idslab/mlp.hpp"
#include "idslab/model_io.hpp"
#include "idslab/pipeline.hpp"
#include "idslab/serialize.hpp"

namespace fs = std::filesystem;
using namespace idslab;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("idslab_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

RunConfig small_run(const fs::path& out) {
  RunConfig cfg;
  SynthSpec spec;
  spec.class_counts = {60, 40};
  spec.n_features = 8;
  spec.informative = {1, 4};
  spec.constant_features = {6};
  cfg.synth = spec;
  cfg.mlp.hidden_layers = {8};
  cfg.mlp.max_epochs = 40;
  cfg.ffs.inner_max_epochs = 10;
  cfg.ffs.max_features = 3;
  cfg.explain_rows = 8;
  cfg.background_rows = 10;
  cfg.max_coalitions = 128;
  cfg.dependence_plots = 2;
  cfg.out_dir = out.string();
  return cfg;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Numeric;
}

}  // namespace

TEST_CASE("confusion matrix input formats") {
  const auto bare = confusion_from_json("[[3, 1], [0, 4]]");
  CHECK(bare.counts[1][1] == 4);
  CHECK(bare.class_names.size() == 2);
  const auto named = confusion_from_json(R"({"classes": ["a", "b"], "counts": [[1, 2], [3, 4]]})");
  CHECK(named.class_names == std::vector<std::string>{"a", "b"});
  for (const char* bad : {"[[1, 2], [3]]", "[[1, -2], [3, 4]]", "[[1.5]]", "{\"classes\": []}",
                          "[]", "not json", R"({"classes": ["a"], "counts": [[1, 2], [3, 4]]})"}) {
    CAPTURE(bad);
    CHECK(kind_of([&] { (void)confusion_from_json(bad); }) == ErrorKind::Format);
  }
}

TEST_CASE("config readers are strict") {
  CHECK(kind_of([] { (void)mlp_config_from_json(Json{{"hidden", {4}}}); }) == ErrorKind::Config);
  CHECK(kind_of([] { (void)mlp_config_from_json(Json{{"max_epochs", "ten"}}); }) == ErrorKind::Config);
  CHECK(kind_of([] { (void)mlp_config_from_json(Json{{"activation", "sigmoidal"}}); }) == ErrorKind::Config);
  CHECK(kind_of([] { (void)ffs_config_from_json(Json{{"fold", 3}}); }) == ErrorKind::Config);
  CHECK(kind_of([] { (void)synth_spec_from_json(Json{{"obfuscation", {{"scal", 2}}}}); }) == ErrorKind::Config);
  CHECK(kind_of([] { (void)run_config_from_json(Json{{"outdir", "x"}}); }) == ErrorKind::Config);

  const auto mlp = mlp_config_from_json(Json{{"hidden_layers", {5, 3}}, {"activation", "tanh"}});
  CHECK(mlp.hidden_layers == std::vector<std::size_t>{5, 3});
  CHECK(mlp.activation == Activation::Tanh);
  CHECK(mlp.max_epochs == MlpConfig{}.max_epochs);

  const auto run = run_config_from_json(Json{{"data", "x.csv"}, {"labels", {"label3"}}, {"seed", 11}});
  CHECK(run.data_path == "x.csv");
  CHECK(run.labels == std::vector<std::string>{"label3"});
  CHECK(run.seed == 11);
}

TEST_CASE("run config validation") {
  RunConfig cfg;
  CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::Config);
  cfg.data_path = "x.csv";
  cfg.validate();
  cfg.labels = {"label4"};
  CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::Config);
  cfg.labels = {"label2"};
  cfg.train_fraction = 1.0;
  CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::Config);
  cfg.train_fraction = 0.8;
  cfg.synth = SynthSpec{};
  CHECK(kind_of([&] { cfg.validate(); }) == ErrorKind::Config);
}

TEST_CASE("exit codes") {
  CHECK(exit_code(ErrorKind::Config) == 2);
  CHECK(exit_code(ErrorKind::Argument) == 2);
  for (auto k : {ErrorKind::Parse, ErrorKind::Schema, ErrorKind::Codec, ErrorKind::Format, ErrorKind::Io}) {
    CHECK(exit_code(k) == 3);
  }
  for (auto k : {ErrorKind::Dimension, ErrorKind::Training, ErrorKind::Numeric, ErrorKind::Capacity}) {
    CHECK(exit_code(k) == 4);
  }
}

TEST_CASE("a small synthetic run writes the full bundle") {
  const fs::path out = scratch("run");
  const auto report = run_experiment(small_run(out));
  REQUIRE_MESSAGE(report.ok, report.error_message);
  const Json written = parse_json(read_text(out / "report.json"), "report.json");
  CHECK(written["status"] == "ok");
  CHECK(written["error"].is_null());
  CHECK(written["canonical"] == report.canonical);
  CHECK_FALSE(written["timings"].empty());

  for (const char* name :
       {"data.csv", "label2/model_full.json", "label2/model.json", "label2/ffs.json",
        "label2/explanations.json", "label2/correlation.json", "label2/confusion_pre.svg",
        "label2/confusion_post.svg", "label2/importance.svg", "label2/force.svg",
        "label2/beeswarm.svg", "label2/correlation_candidates.svg", "label2/correlation_selected.svg"}) {
    CAPTURE(name);
    CHECK(fs::exists(out / name));
    CHECK(std::find(report.artifacts.begin(), report.artifacts.end(), name) != report.artifacts.end());
  }
  for (const auto& a : report.artifacts) CHECK(fs::exists(out / a));

  const auto& prong = report.canonical["prongs"][0];
  CHECK(prong["label"] == "label2");
  CHECK(prong["zero_variance_features"] == Json{"f06"});
  const auto selected = prong["ffs"]["selected_names"];
  CHECK_FALSE(selected.empty());
  CHECK(prong["post_ffs"]["features"] == selected);

  const MlpModel model = load_model(out / "label2" / "model.json");
  CHECK(model.n_inputs == selected.size());

  ExplainOnlyConfig ecfg;
  ecfg.model_path = (out / "label2" / "model.json").string();
  ecfg.data_path = (out / "data.csv").string();
  ecfg.out_dir = (out / "again").string();
  ecfg.explain_rows = 5;
  ecfg.background_rows = 5;
  const auto paths = explain_only(ecfg);
  CHECK_FALSE(paths.empty());
  for (const auto& p : paths) CHECK(fs::exists(out / "again" / p));
  fs::remove_all(out);
}

TEST_CASE("a missing data file fails in the load stage") {
  const fs::path out = scratch("missing");
  RunConfig cfg = small_run(out);
  cfg.synth.reset();
  cfg.data_path = (out / "absent.csv").string();
  const auto report = run_experiment(cfg);
  CHECK_FALSE(report.ok);
  CHECK(report.failed_stage == "load");
  CHECK(report.error_kind == ErrorKind::Io);
  const Json written = parse_json(read_text(out / "report.json"), "report.json");
  CHECK(written["status"] == "failed");
  CHECK(written["error"]["stage"] == "load");
  CHECK(written["error"]["message"].get<std::string>().find("absent.csv") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("an unknown feature fails in the encode stage") {
  const fs::path out = scratch("feature");
  RunConfig cfg = small_run(out);
  cfg.features = {"f01", "nope"};
  const auto report = run_experiment(cfg);
  CHECK_FALSE(report.ok);
  CHECK(report.failed_prong == "label2");
  CHECK(report.error_message.find("nope") != std::string::npos);
  fs::remove_all(out);
}
