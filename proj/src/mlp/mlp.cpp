#include "idslab/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "idslab/error.hpp"

namespace idslab {

namespace {

constexpr double kMinProbability = 1e-12;

void check_input(const MlpModel& model, const Matrix& x) {
  if (x.cols() != model.n_inputs) {
    fail(ErrorKind::Dimension, "model expects " + std::to_string(model.n_inputs) +
                                   " inputs, got matrix " + x.shape());
  }
}

void check_labels(const MlpModel& model, const Matrix& x, std::span<const int> y) {
  if (y.size() != x.rows()) {
    fail(ErrorKind::Dimension, "label count " + std::to_string(y.size()) +
                                   " does not match matrix " + x.shape());
  }
  for (int c : y) {
    if (c < 0 || static_cast<std::size_t>(c) >= model.n_classes) {
      fail(ErrorKind::Argument, "label " + std::to_string(c) + " outside 0.." +
                                    std::to_string(model.n_classes - 1));
    }
  }
}

void activate(Matrix& z, Activation a) {
  for (double& v : z.data()) {
    v = a == Activation::Relu ? (v > 0.0 ? v : 0.0) : std::tanh(v);
  }
}

Matrix affine(const Matrix& in, const DenseLayer& layer) {
  Matrix z = multiply(in, layer.weights);
  add_row_vector(z, layer.biases);
  return z;
}

/// Layer outputs after activation; the last entry holds the raw logits.
std::vector<Matrix> forward_trace(const MlpModel& model, const Matrix& x) {
  std::vector<Matrix> outputs;
  outputs.reserve(model.layers.size());
  const Matrix* in = &x;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    Matrix z = affine(*in, model.layers[l]);
    if (l + 1 < model.layers.size()) activate(z, model.config.activation);
    outputs.push_back(std::move(z));
    in = &outputs.back();
  }
  return outputs;
}

double penalty(const MlpModel& model) {
  double sum = 0.0;
  for (const auto& layer : model.layers) {
    for (double w : layer.weights.data()) sum += w * w;
  }
  return 0.5 * model.config.l2_penalty * sum;
}

double cross_entropy(const Matrix& probabilities, std::span<const int> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < probabilities.rows(); ++i) {
    const double p = probabilities(i, static_cast<std::size_t>(y[i]));
    sum -= std::log(std::max(p, kMinProbability));
  }
  return sum / static_cast<double>(probabilities.rows());
}

bool all_finite(const MlpModel& model) {
  for (const auto& layer : model.layers) {
    for (double w : layer.weights.data()) {
      if (!std::isfinite(w)) return false;
    }
    for (double b : layer.biases) {
      if (!std::isfinite(b)) return false;
    }
  }
  return true;
}

struct AdamState {
  std::vector<DenseLayer> m;
  std::vector<DenseLayer> v;
  std::size_t step = 0;
};

void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> m,
                 std::span<double> v, const MlpConfig& cfg, double correction1,
                 double correction2) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grads[i];
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
    const double m_hat = m[i] / correction1;
    const double v_hat = v[i] / correction2;
    params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
}

}  // namespace

const char* to_string(Activation a) noexcept {
  return a == Activation::Relu ? "relu" : "tanh";
}

Activation activation_from_string(std::string_view name) {
  if (name == "relu") return Activation::Relu;
  if (name == "tanh") return Activation::Tanh;
  fail(ErrorKind::Config, "unknown activation '" + std::string(name) + "'");
}

void MlpConfig::validate() const {
  for (auto w : hidden_layers) {
    if (w < 1) fail(ErrorKind::Argument, "hidden layer width must be >= 1");
  }
  auto non_negative = [](double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      fail(ErrorKind::Argument, std::string(what) + " must be finite and >= 0");
    }
  };
  non_negative(learning_rate, "learning_rate");
  non_negative(l2_penalty, "l2_penalty");
  non_negative(tolerance, "tolerance");
  non_negative(epsilon, "epsilon");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    fail(ErrorKind::Argument, "adam betas must lie in [0, 1)");
  }
  if (batch_size < 1) fail(ErrorKind::Argument, "batch_size must be >= 1");
}

std::size_t MlpModel::parameter_count() const noexcept {
  std::size_t count = 0;
  for (const auto& layer : layers) count += layer.weights.size() + layer.biases.size();
  return count;
}

MlpModel init_model(const MlpConfig& config, std::size_t n_inputs, std::size_t n_classes, Rng& rng) {
  config.validate();
  if (n_inputs < 1) fail(ErrorKind::Argument, "model needs at least one input");
  if (n_classes < 2) {
    fail(ErrorKind::Argument, "model needs at least two classes, got " + std::to_string(n_classes));
  }
  MlpModel model;
  model.config = config;
  model.n_inputs = n_inputs;
  model.n_classes = n_classes;

  std::vector<std::size_t> widths;
  widths.push_back(n_inputs);
  widths.insert(widths.end(), config.hidden_layers.begin(), config.hidden_layers.end());
  widths.push_back(n_classes);

  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const std::size_t fan_in = widths[l];
    const std::size_t fan_out = widths[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    DenseLayer layer{Matrix(fan_in, fan_out), std::vector<double>(fan_out, 0.0)};
    for (double& w : layer.weights.data()) w = -bound + 2.0 * bound * rng.uniform();
    model.layers.push_back(std::move(layer));
  }
  return model;
}

Matrix logits(const MlpModel& model, const Matrix& x) {
  check_input(model, x);
  auto trace = forward_trace(model, x);
  return std::move(trace.back());
}

Matrix softmax(const Matrix& z) {
  Matrix p(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    const auto in = z.row(i);
    auto out = p.row(i);
    const double peak = *std::max_element(in.begin(), in.end());
    double sum = 0.0;
    for (std::size_t j = 0; j < in.size(); ++j) {
      out[j] = std::exp(in[j] - peak);
      sum += out[j];
    }
    for (double& v : out) v /= sum;
  }
  return p;
}

Matrix forward(const MlpModel& model, const Matrix& x) {
  return softmax(logits(model, x));
}

std::vector<int> argmax_rows(const Matrix& probabilities) {
  std::vector<int> out(probabilities.rows(), 0);
  for (std::size_t i = 0; i < probabilities.rows(); ++i) {
    const auto r = probabilities.row(i);
    std::size_t best = 0;
    for (std::size_t j = 1; j < r.size(); ++j) {
      if (r[j] > r[best]) best = j;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

std::vector<int> predict(const MlpModel& model, const Matrix& x) {
  return argmax_rows(forward(model, x));
}

double loss(const MlpModel& model, const Matrix& x, std::span<const int> y) {
  check_input(model, x);
  check_labels(model, x, y);
  if (x.rows() == 0) fail(ErrorKind::Argument, "loss of an empty batch");
  return cross_entropy(forward(model, x), y) + penalty(model);
}

LossAndGradients loss_and_gradients(const MlpModel& model, const Matrix& x, std::span<const int> y) {
  check_input(model, x);
  check_labels(model, x, y);
  if (x.rows() == 0) fail(ErrorKind::Argument, "gradient of an empty batch");

  const auto trace = forward_trace(model, x);
  const Matrix probabilities = softmax(trace.back());
  const double n = static_cast<double>(x.rows());

  LossAndGradients out;
  out.loss = cross_entropy(probabilities, y) + penalty(model);
  out.gradients.resize(model.layers.size());

  // d(loss)/d(logits) = (p - onehot) / n
  Matrix delta = probabilities;
  for (std::size_t i = 0; i < delta.rows(); ++i) delta(i, static_cast<std::size_t>(y[i])) -= 1.0;
  for (double& v : delta.data()) v /= n;

  for (std::size_t l = model.layers.size(); l-- > 0;) {
    const Matrix& input = l == 0 ? x : trace[l - 1];
    const DenseLayer& layer = model.layers[l];
    DenseLayer& grad = out.gradients[l];
    grad.weights = multiply_transposed_a(input, delta);
    for (std::size_t k = 0; k < grad.weights.size(); ++k) {
      grad.weights.data()[k] += model.config.l2_penalty * layer.weights.data()[k];
    }
    grad.biases = column_sums(delta);
    if (l == 0) break;

    Matrix upstream = multiply_transposed_b(delta, layer.weights);
    const Matrix& activated = trace[l - 1];
    for (std::size_t k = 0; k < upstream.size(); ++k) {
      const double a = activated.data()[k];
      const double derivative = model.config.activation == Activation::Relu
                                    ? (a > 0.0 ? 1.0 : 0.0)
                                    : 1.0 - a * a;
      upstream.data()[k] *= derivative;
    }
    delta = std::move(upstream);
  }
  return out;
}

MlpModel train(MlpModel model, const Matrix& x, std::span<const int> y, const MlpConfig& config,
               Rng& rng, std::span<const std::string> class_names) {
  config.validate();
  model.config = config;
  check_input(model, x);
  check_labels(model, x, y);

  std::vector<std::size_t> counts(model.n_classes, 0);
  for (int c : y) ++counts[static_cast<std::size_t>(c)];
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      const std::string name = c < class_names.size() ? "'" + class_names[c] + "'"
                                                      : std::to_string(c);
      fail(ErrorKind::Training, "class " + name + " is absent from the training data");
    }
  }

  AdamState adam;
  for (const auto& layer : model.layers) {
    adam.m.push_back({Matrix(layer.weights.rows(), layer.weights.cols()),
                      std::vector<double>(layer.biases.size(), 0.0)});
  }
  adam.v = adam.m;

  const std::size_t n = x.rows();
  double best = std::numeric_limits<double>::infinity();
  std::size_t stale = 0;
  std::vector<int> batch_y;

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    const auto order = rng.shuffle(n);
    double weighted_loss = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      const std::span<const std::size_t> batch(order.data() + start, stop - start);
      const Matrix batch_x = x.select_rows(batch);
      batch_y.clear();
      for (auto i : batch) batch_y.push_back(y[i]);

      const auto lg = loss_and_gradients(model, batch_x, batch_y);
      weighted_loss += lg.loss * static_cast<double>(batch.size());

      ++adam.step;
      const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(adam.step));
      const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(adam.step));
      for (std::size_t l = 0; l < model.layers.size(); ++l) {
        adam_update(model.layers[l].weights.data(), lg.gradients[l].weights.data(),
                    adam.m[l].weights.data(), adam.v[l].weights.data(), config, c1, c2);
        adam_update(model.layers[l].biases, lg.gradients[l].biases, adam.m[l].biases,
                    adam.v[l].biases, config, c1, c2);
      }
      if (!all_finite(model)) {
        fail(ErrorKind::Numeric, "non-finite parameter after step " + std::to_string(adam.step) +
                                     " (epoch " + std::to_string(epoch + 1) + ")");
      }
    }
    const double epoch_loss = weighted_loss / static_cast<double>(n);
    model.history.push_back(epoch_loss);

    if (epoch_loss < best - config.tolerance) {
      best = epoch_loss;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  return model;
}

}  // namespace idslab
