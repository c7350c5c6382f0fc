#pragma once

#include <string_view>

#include "json.hpp"

#include "idslab/correlation.hpp"
#include "idslab/dataset.hpp"
#include "idslab/explain.hpp"
#include "idslab/ffs.hpp"
#include "idslab/metrics.hpp"
#include "idslab/mlp.hpp"
#include "idslab/synth.hpp"

namespace idslab {

using Json = nlohmann::ordered_json;

Json to_json(const ConfusionMatrix& cm);

/// Rows in table order: one per class, then accuracy, macro avg and weighted
/// avg. Each row holds full-precision values and a 2-dp "display" copy.
Json to_json(const ClassReport& r);

/// `names` maps candidate column indices to feature names.
Json to_json(const FfsResult& result, const std::vector<std::string>& names);

Json to_json(const LabelCodec& codec);

/// Undefined correlations are written as null.
Json to_json(const CorrelationMatrix& corr);

/// Full attributions plus the global ranking.
Json to_json(const Explanation& expl);

Json to_json(const MlpConfig& cfg);
Json to_json(const FfsConfig& cfg);
Json to_json(const SynthSpec& spec);

/// Readers reject unknown keys and wrongly typed values with a config error;
/// absent keys keep their defaults.
MlpConfig mlp_config_from_json(const Json& j);
FfsConfig ffs_config_from_json(const Json& j);
SynthSpec synth_spec_from_json(const Json& j);

/// Accepts {"counts": [[...]], "classes": [...]} or a bare array of rows.
/// Malformed input raises a format error.
ConfusionMatrix confusion_from_json(std::string_view text);

/// Parses JSON text, raising a format error that names `what` on failure.
Json parse_json(std::string_view text, std::string_view what);

/// Compact-indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace idslab
