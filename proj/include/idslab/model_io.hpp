#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "idslab/mlp.hpp"

namespace idslab {

inline constexpr std::string_view kModelFormat = "idslab-mlp";
inline constexpr int kModelVersion = 1;

/// Bit pattern of a double as 16 lowercase hex digits.
std::string encode_double(double v);
double decode_double(std::string_view hex);

/// Versioned JSON document; parameters are hex-encoded so a round trip is
/// bit exact.
std::string serialize_model(const MlpModel& model);
MlpModel deserialize_model(std::string_view text);

void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace idslab
