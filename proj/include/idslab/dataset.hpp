#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "idslab/csv.hpp"
#include "idslab/matrix.hpp"

namespace idslab {

/// How a label column is interpreted.
///  - Binary: two string classes (direct attack vs legitimate traffic).
///  - Ternary: numeric codes 1/2/3 for direct, legitimate and obfuscated.
enum class LabelScheme { Binary, Ternary };

/// Maps "label2"/"label_2" to Binary and "label3"/"label_3" to Ternary
/// (case-insensitive). Throws a config error for anything else.
LabelScheme scheme_for_column(std::string_view label_column);

/// Bijection between the raw label token found in the data and an integer
/// class code. Codes index `raw_values` and `display_names`.
class LabelCodec {
 public:
  LabelCodec() = default;
  LabelCodec(std::vector<std::string> raw_values, std::vector<std::string> display_names);

  /// Codes assigned in lexicographic order of the distinct raw values.
  static LabelCodec lexicographic(std::vector<std::string> values);
  /// The fixed 1/2/3 -> 0/1/2 mapping for three-class labels.
  static LabelCodec ternary();

  int encode(std::string_view raw) const;
  const std::string& decode(int code) const;

  std::size_t size() const noexcept { return raw_values_.size(); }
  const std::vector<std::string>& raw_values() const noexcept { return raw_values_; }
  const std::vector<std::string>& display_names() const noexcept { return display_names_; }

  friend bool operator==(const LabelCodec&, const LabelCodec&) = default;

 private:
  std::vector<std::string> raw_values_;
  std::vector<std::string> display_names_;
};

struct Dataset {
  Matrix x;
  std::vector<std::string> feature_names;
  std::vector<int> y;
  std::vector<std::string> classes;
  std::string label_column;

  std::size_t n_samples() const noexcept { return x.rows(); }
  std::size_t n_features() const noexcept { return x.cols(); }
  std::size_t n_classes() const noexcept { return classes.size(); }

  /// Index of a feature by name, or a schema error.
  std::size_t feature_index(std::string_view name) const;
  /// Per-class sample counts.
  std::vector<std::size_t> class_counts() const;
};

/// Names of the candidate features used when a run does not configure its
/// own list. Only the features that are named in the published analysis are
/// listed; the remaining ones are left to configuration.
const std::vector<std::string>& default_candidate_features();

/// Selects `feature_names` (in the given order) and encodes `label_column`.
/// Binary labels use `codec` when supplied, otherwise a lexicographic codec
/// built from the data. Ternary labels always use LabelCodec::ternary().
std::pair<Dataset, LabelCodec> build_dataset(const RawTable& table,
                                             const std::vector<std::string>& feature_names,
                                             const std::string& label_column,
                                             const std::optional<LabelCodec>& codec = std::nullopt);

/// Parses a decimal number, accepting surrounding blanks only.
std::optional<double> parse_number(std::string_view cell);

}  // namespace idslab
