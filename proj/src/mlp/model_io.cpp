#include "idslab/model_io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "idslab/error.hpp"

namespace idslab {

using ordered_json = nlohmann::ordered_json;

std::string encode_double(double v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(v)));
  return buf;
}

double decode_double(std::string_view hex) {
  std::uint64_t bits = 0;
  const auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), bits, 16);
  if (hex.size() != 16 || ec != std::errc() || ptr != hex.data() + hex.size()) {
    fail(ErrorKind::Format, "invalid hex-encoded double '" + std::string(hex) + "'");
  }
  return std::bit_cast<double>(bits);
}

namespace {

ordered_json encode_values(std::span<const double> values) {
  ordered_json out = ordered_json::array();
  for (double v : values) out.push_back(encode_double(v));
  return out;
}

std::vector<double> decode_values(const ordered_json& array, std::size_t expected, const char* what) {
  if (!array.is_array() || array.size() != expected) {
    fail(ErrorKind::Format, std::string(what) + ": expected " + std::to_string(expected) + " values");
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& item : array) out.push_back(decode_double(item.get<std::string>()));
  return out;
}

ordered_json encode_config(const MlpConfig& c) {
  ordered_json j;
  j["hidden_layers"] = c.hidden_layers;
  j["activation"] = to_string(c.activation);
  j["learning_rate"] = encode_double(c.learning_rate);
  j["beta1"] = encode_double(c.beta1);
  j["beta2"] = encode_double(c.beta2);
  j["epsilon"] = encode_double(c.epsilon);
  j["batch_size"] = c.batch_size;
  j["max_epochs"] = c.max_epochs;
  j["l2_penalty"] = encode_double(c.l2_penalty);
  j["patience"] = c.patience;
  j["tolerance"] = encode_double(c.tolerance);
  j["init_seed"] = c.init_seed;
  return j;
}

MlpConfig decode_config(const ordered_json& j) {
  MlpConfig c;
  c.hidden_layers = j.at("hidden_layers").get<std::vector<std::size_t>>();
  c.activation = activation_from_string(j.at("activation").get<std::string>());
  c.learning_rate = decode_double(j.at("learning_rate").get<std::string>());
  c.beta1 = decode_double(j.at("beta1").get<std::string>());
  c.beta2 = decode_double(j.at("beta2").get<std::string>());
  c.epsilon = decode_double(j.at("epsilon").get<std::string>());
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.max_epochs = j.at("max_epochs").get<std::size_t>();
  c.l2_penalty = decode_double(j.at("l2_penalty").get<std::string>());
  c.patience = j.at("patience").get<std::size_t>();
  c.tolerance = decode_double(j.at("tolerance").get<std::string>());
  c.init_seed = j.at("init_seed").get<std::uint64_t>();
  return c;
}

ordered_json encode_metadata(const ModelMetadata& m) {
  ordered_json j;
  j["feature_names"] = m.feature_names;
  j["class_names"] = m.class_names;
  j["label_column"] = m.label_column;
  j["scaler_mean"] = encode_values(m.scaler_mean);
  j["scaler_std"] = encode_values(m.scaler_std);
  j["scaler_zero_variance"] = m.scaler_zero_variance;
  return j;
}

ModelMetadata decode_metadata(const ordered_json& j) {
  ModelMetadata m;
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  m.class_names = j.at("class_names").get<std::vector<std::string>>();
  m.label_column = j.at("label_column").get<std::string>();
  m.scaler_mean = decode_values(j.at("scaler_mean"), j.at("scaler_mean").size(), "scaler_mean");
  m.scaler_std = decode_values(j.at("scaler_std"), j.at("scaler_std").size(), "scaler_std");
  m.scaler_zero_variance = j.at("scaler_zero_variance").get<std::vector<bool>>();
  return m;
}

}  // namespace

std::string serialize_model(const MlpModel& model) {
  ordered_json doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelVersion;
  doc["n_inputs"] = model.n_inputs;
  doc["n_classes"] = model.n_classes;
  doc["config"] = encode_config(model.config);
  ordered_json layers = ordered_json::array();
  for (const auto& layer : model.layers) {
    ordered_json l;
    l["rows"] = layer.weights.rows();
    l["cols"] = layer.weights.cols();
    l["weights"] = encode_values(layer.weights.data());
    l["biases"] = encode_values(layer.biases);
    layers.push_back(std::move(l));
  }
  doc["layers"] = std::move(layers);
  doc["history"] = encode_values(model.history);
  doc["metadata"] = encode_metadata(model.metadata);
  return doc.dump(1) + "\n";
}

MlpModel deserialize_model(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Format, std::string("malformed model file: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", "") != kModelFormat) {
      fail(ErrorKind::Format, "not an idslab model file");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelVersion) {
      fail(ErrorKind::Format, "model version " + std::to_string(version) +
                                  " is not supported (expected " + std::to_string(kModelVersion) +
                                  ")");
    }
    MlpModel model;
    model.n_inputs = doc.at("n_inputs").get<std::size_t>();
    model.n_classes = doc.at("n_classes").get<std::size_t>();
    model.config = decode_config(doc.at("config"));

    std::size_t expected_in = model.n_inputs;
    const auto& layers = doc.at("layers");
    if (!layers.is_array() || layers.size() != model.config.hidden_layers.size() + 1) {
      fail(ErrorKind::Format, "layer count does not match config");
    }
    for (const auto& l : layers) {
      const auto rows = l.at("rows").get<std::size_t>();
      const auto cols = l.at("cols").get<std::size_t>();
      if (rows != expected_in) fail(ErrorKind::Format, "layer shapes do not chain");
      DenseLayer layer{Matrix(rows, cols, decode_values(l.at("weights"), rows * cols, "weights")),
                       decode_values(l.at("biases"), cols, "biases")};
      model.layers.push_back(std::move(layer));
      expected_in = cols;
    }
    if (expected_in != model.n_classes) fail(ErrorKind::Format, "output layer width != n_classes");
    const auto& history = doc.at("history");
    model.history = decode_values(history, history.size(), "history");
    model.metadata = decode_metadata(doc.at("metadata"));
    return model;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Format, std::string("malformed model file: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Format) throw;
    fail(ErrorKind::Format, std::string("malformed model file: ") + e.what());
  }
}

void save_model(const MlpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << serialize_model(model);
}

MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return deserialize_model(buffer.str());
}

}  // namespace idslab
