#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "idslab/csv.hpp"
#include "idslab/dataset.hpp"

namespace idslab {

/// Obfuscated samples are direct-attack draws pulled toward the legitimate
/// class mean: v' = direct + shift * (legit - direct) + scale * (v - direct),
/// applied on the informative features.
struct ObfuscationTransform {
  double scale = 0.5;
  double shift = 0.5;
};

/// Parameters of a schema-compatible synthetic dataset.
///
/// Class order is direct attack, legitimate, then (three-class mode only)
/// obfuscated attack. `separation` is the Euclidean distance between the
/// direct and legitimate class means in the informative subspace, spread
/// evenly over the informative features. Noise features are standard normal
/// for every class. Each column is finally mapped through a seeded affine
/// transform so raw values look like unscaled measurements.
struct SynthSpec {
  std::vector<std::size_t> class_counts{200, 200};
  std::size_t n_features = 20;
  std::size_t n_informative = 3;
  /// Explicit informative columns; overrides n_informative when non-empty.
  std::vector<std::size_t> informative;
  /// Columns that hold one value for every sample.
  std::vector<std::size_t> constant_features;
  double separation = 6.0;
  ObfuscationTransform obfuscation;
  std::uint64_t seed = 7;
};

struct SynthData {
  /// Feature columns f00..fNN followed by the label column(s).
  RawTable table;
  /// `table` encoded on all features with the mode's natural label column.
  Dataset dataset;
  LabelCodec codec;
  std::vector<std::size_t> informative;
};

/// Two-class specs emit a "label2" column with values direct_attack /
/// legitimate. Three-class specs emit "label3" (1/2/3) plus a "label2"
/// column where obfuscated attacks count as direct_attack.
SynthData synthesize(const SynthSpec& spec);

std::vector<std::string> synthetic_feature_names(std::size_t n_features);

}  // namespace idslab
