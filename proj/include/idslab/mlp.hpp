#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idslab/matrix.hpp"
#include "idslab/rng.hpp"

namespace idslab {

enum class Activation { Relu, Tanh };

const char* to_string(Activation a) noexcept;
Activation activation_from_string(std::string_view name);

/// Hyperparameters of the multilayer perceptron and its Adam optimizer.
struct MlpConfig {
  std::vector<std::size_t> hidden_layers{100};
  Activation activation = Activation::Relu;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 200;
  double l2_penalty = 1e-4;
  /// Training stops after this many epochs without the epoch loss dropping
  /// by more than `tolerance`.
  std::size_t patience = 10;
  double tolerance = 1e-6;
  std::uint64_t init_seed = 0;

  /// Throws an argument error on invalid settings.
  void validate() const;

  friend bool operator==(const MlpConfig&, const MlpConfig&) = default;
};

/// Fully connected layer: outputs = inputs * weights + biases, with weights
/// stored fan_in x fan_out.
struct DenseLayer {
  Matrix weights;
  std::vector<double> biases;

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Preprocessing that goes with a trained model so it can be reapplied to
/// raw data later. Empty when the model is used on already-scaled inputs.
struct ModelMetadata {
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;
  std::string label_column;
  std::vector<double> scaler_mean;
  std::vector<double> scaler_std;
  std::vector<bool> scaler_zero_variance;

  friend bool operator==(const ModelMetadata&, const ModelMetadata&) = default;
};

struct MlpModel {
  MlpConfig config;
  std::vector<DenseLayer> layers;
  std::size_t n_inputs = 0;
  std::size_t n_classes = 0;
  /// Mean training loss per completed epoch.
  std::vector<double> history;
  ModelMetadata metadata;

  std::size_t parameter_count() const noexcept;

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

/// Glorot-uniform weights, zero biases.
MlpModel init_model(const MlpConfig& config, std::size_t n_inputs, std::size_t n_classes, Rng& rng);

/// Output-layer pre-activations.
Matrix logits(const MlpModel& model, const Matrix& x);
/// Row-wise softmax with max subtraction.
Matrix softmax(const Matrix& logits);
/// Class probabilities; each row sums to 1.
Matrix forward(const MlpModel& model, const Matrix& x);

inline Matrix predict_proba(const MlpModel& model, const Matrix& x) { return forward(model, x); }
/// Argmax of the probabilities, ties to the lowest class code.
std::vector<int> predict(const MlpModel& model, const Matrix& x);
std::vector<int> argmax_rows(const Matrix& probabilities);

struct LossAndGradients {
  double loss = 0.0;
  /// Same shapes as MlpModel::layers.
  std::vector<DenseLayer> gradients;
};

/// Mean cross-entropy plus (l2_penalty / 2) * sum of squared weights (biases
/// are not penalized), and its gradient by backpropagation.
LossAndGradients loss_and_gradients(const MlpModel& model, const Matrix& x, std::span<const int> y);
double loss(const MlpModel& model, const Matrix& x, std::span<const int> y);

/// Mini-batch Adam training. Samples are reshuffled from `rng` every epoch.
/// `class_names`, when given, is used to name a class missing from `y`.
MlpModel train(MlpModel model, const Matrix& x, std::span<const int> y, const MlpConfig& config,
               Rng& rng, std::span<const std::string> class_names = {});

}  // namespace idslab
