#include "idslab/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "idslab/error.hpp"

namespace idslab {

LabelScheme scheme_for_column(std::string_view label_column) {
  std::string key;
  for (char c : label_column) {
    if (c == '_' || c == '-') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "label2") return LabelScheme::Binary;
  if (key == "label3") return LabelScheme::Ternary;
  fail(ErrorKind::Config,
       "label column '" + std::string(label_column) + "' is neither label2 nor label3");
}

LabelCodec::LabelCodec(std::vector<std::string> raw_values, std::vector<std::string> display_names)
    : raw_values_(std::move(raw_values)), display_names_(std::move(display_names)) {
  if (raw_values_.size() != display_names_.size()) {
    fail(ErrorKind::Codec, "codec has " + std::to_string(raw_values_.size()) + " values but " +
                               std::to_string(display_names_.size()) + " display names");
  }
  std::set<std::string> unique(raw_values_.begin(), raw_values_.end());
  if (unique.size() != raw_values_.size()) fail(ErrorKind::Codec, "codec values are not unique");
}

LabelCodec LabelCodec::lexicographic(std::vector<std::string> values) {
  std::set<std::string> unique(values.begin(), values.end());
  std::vector<std::string> sorted(unique.begin(), unique.end());
  return LabelCodec(sorted, sorted);
}

LabelCodec LabelCodec::ternary() {
  return LabelCodec({"1", "2", "3"}, {"Direct Attack", "Legitimate Traffic", "Obfuscated Attack"});
}

int LabelCodec::encode(std::string_view raw) const {
  for (std::size_t i = 0; i < raw_values_.size(); ++i) {
    if (raw_values_[i] == raw) return static_cast<int>(i);
  }
  fail(ErrorKind::Codec, "unknown label value '" + std::string(raw) + "'");
}

const std::string& LabelCodec::decode(int code) const {
  if (code < 0 || static_cast<std::size_t>(code) >= raw_values_.size()) {
    fail(ErrorKind::Codec, "label code " + std::to_string(code) + " out of range");
  }
  return raw_values_[static_cast<std::size_t>(code)];
}

std::size_t Dataset::feature_index(std::string_view name) const {
  for (std::size_t i = 0; i < feature_names.size(); ++i) {
    if (feature_names[i] == name) return i;
  }
  fail(ErrorKind::Schema, "unknown feature '" + std::string(name) + "'");
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(classes.size(), 0);
  for (int c : y) ++counts[static_cast<std::size_t>(c)];
  return counts;
}

const std::vector<std::string>& default_candidate_features() {
  static const std::vector<std::string> names = {
      "MeanTTLIn",        "MedTCPHdrLen",     "SigPktLenIn",      "SigTTLOut",
      "MedTTLOut",        "SumPktOut",        "BytesPerSessOut",  "InPktLen8s10i[1]",
      "InPktLen8s10i[7]", "OutPktLen1s10i[0]", "PolyIn8ordIn[5]", "FourGonAngleIn[9]",
  };
  return names;
}

std::optional<double> parse_number(std::string_view cell) {
  while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.front()))) cell.remove_prefix(1);
  while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back()))) cell.remove_suffix(1);
  if (cell.starts_with('+')) cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

namespace {

std::string normalize_ternary_token(std::string_view raw) {
  auto value = parse_number(raw);
  if (!value || *value != std::floor(*value)) {
    fail(ErrorKind::Codec, "unknown label3 value '" + std::string(raw) + "'");
  }
  return std::to_string(static_cast<long long>(*value));
}

}  // namespace

std::pair<Dataset, LabelCodec> build_dataset(const RawTable& table,
                                             const std::vector<std::string>& feature_names,
                                             const std::string& label_column,
                                             const std::optional<LabelCodec>& codec) {
  const LabelScheme scheme = scheme_for_column(label_column);
  if (feature_names.empty()) fail(ErrorKind::Schema, "no features requested");

  std::vector<std::size_t> columns;
  columns.reserve(feature_names.size());
  std::set<std::string> requested;
  for (const auto& name : feature_names) {
    if (!requested.insert(name).second) {
      fail(ErrorKind::Schema, "feature '" + name + "' requested twice");
    }
    const std::size_t col = table.find_column(name);
    if (col == RawTable::npos) fail(ErrorKind::Schema, "missing column '" + name + "'");
    columns.push_back(col);
  }
  const std::size_t label_col = table.find_column(label_column);
  if (label_col == RawTable::npos) {
    fail(ErrorKind::Schema, "missing label column '" + label_column + "'");
  }

  const std::size_t n = table.row_count();
  Dataset ds;
  ds.x = Matrix(n, columns.size());
  ds.feature_names = feature_names;
  ds.label_column = label_column;
  ds.y.resize(n);

  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const auto& cell = table.cells[r][columns[j]];
      auto value = parse_number(cell);
      if (!value) {
        fail(ErrorKind::Parse, "row " + std::to_string(r + 1) + ", column '" + feature_names[j] +
                                   "': not a number: '" + cell + "'");
      }
      ds.x(r, j) = *value;
    }
  }

  LabelCodec resolved;
  if (scheme == LabelScheme::Ternary) {
    resolved = LabelCodec::ternary();
    for (std::size_t r = 0; r < n; ++r) {
      ds.y[r] = resolved.encode(normalize_ternary_token(table.cells[r][label_col]));
    }
  } else {
    if (codec) {
      resolved = *codec;
    } else {
      std::vector<std::string> values;
      values.reserve(n);
      for (const auto& row : table.cells) values.push_back(row[label_col]);
      resolved = LabelCodec::lexicographic(std::move(values));
    }
    if (resolved.size() != 2) {
      fail(ErrorKind::Codec, "label2 must have exactly 2 classes, found " +
                                 std::to_string(resolved.size()));
    }
    for (std::size_t r = 0; r < n; ++r) ds.y[r] = resolved.encode(table.cells[r][label_col]);
  }
  ds.classes = resolved.display_names();
  return {std::move(ds), std::move(resolved)};
}

}  // namespace idslab
