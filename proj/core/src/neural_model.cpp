#include "tcprio/neural_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tcprio/errors.hpp"

namespace tcprio {
namespace {

std::vector<DenseLayer> make_shapes(std::size_t input_dim,
                                    const std::vector<std::size_t>& hidden) {
  if (input_dim == 0) throw ConfigError("network input dimension must be positive");
  std::vector<DenseLayer> layers;
  std::size_t fan_in = input_dim;
  auto add = [&](std::size_t out) {
    if (out == 0) throw ConfigError("hidden layer width must be positive");
    DenseLayer l;
    l.inputs = fan_in;
    l.outputs = out;
    l.weights.assign(fan_in * out, 0.0);
    l.bias.assign(out, 0.0);
    layers.push_back(std::move(l));
    fan_in = out;
  };
  for (auto width : hidden) add(width);
  add(1);
  return layers;
}

}  // namespace

NeuralModel::NeuralModel(std::size_t input_dim, std::vector<std::size_t> hidden_layers,
                         std::uint64_t seed)
    : layers_(make_shapes(input_dim, hidden_layers)) {
  std::mt19937_64 rng(seed);
  for (auto& l : layers_) {
    const double r = std::sqrt(6.0 / static_cast<double>(l.inputs + l.outputs));
    std::uniform_real_distribution<double> dist(-r, r);
    for (auto& w : l.weights) w = dist(rng);
  }
}

NeuralModel NeuralModel::zeros(std::size_t input_dim, std::vector<std::size_t> hidden_layers) {
  NeuralModel m;
  m.layers_ = make_shapes(input_dim, hidden_layers);
  return m;
}

NeuralModel NeuralModel::from_layers(std::vector<DenseLayer> layers) {
  if (layers.empty()) throw ConfigError("network needs at least one layer");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (l.inputs == 0 || l.outputs == 0 || l.weights.size() != l.inputs * l.outputs ||
        l.bias.size() != l.outputs) {
      throw ConfigError("layer " + std::to_string(i) + " has inconsistent shape");
    }
    if (i > 0 && layers[i - 1].outputs != l.inputs) {
      throw ConfigError("layer " + std::to_string(i) + " does not chain");
    }
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(l.weights.begin(), l.weights.end(), finite) ||
        !std::all_of(l.bias.begin(), l.bias.end(), finite)) {
      throw ConfigError("layer " + std::to_string(i) + " has non-finite parameters");
    }
  }
  if (layers.back().outputs != 1) throw ConfigError("network must have one output");
  NeuralModel m;
  m.layers_ = std::move(layers);
  return m;
}

void NeuralModel::check_input(std::size_t dim) const {
  if (dim != input_dimension()) {
    throw ConfigError("state dimension " + std::to_string(dim) +
                      " does not match network input " +
                      std::to_string(input_dimension()));
  }
}

double NeuralModel::forward(std::span<const double> input,
                            std::vector<std::vector<double>>* activations) const {
  std::vector<double> current(input.begin(), input.end());
  if (activations) {
    activations->resize(layers_.size() + 1);
    (*activations)[0] = current;
  }
  std::vector<double> next;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const auto& l = layers_[li];
    next.assign(l.bias.begin(), l.bias.end());
    for (std::size_t o = 0; o < l.outputs; ++o) {
      const double* row = l.weights.data() + o * l.inputs;
      double acc = 0.0;
      for (std::size_t i = 0; i < l.inputs; ++i) acc += row[i] * current[i];
      next[o] += acc;
    }
    const bool hidden = li + 1 < layers_.size();
    if (hidden) {
      for (auto& v : next) v = std::max(v, 0.0);
    }
    current.swap(next);
    if (activations) (*activations)[li + 1] = current;
  }
  return current[0];
}

double NeuralModel::predict(std::span<const double> input) const {
  check_input(input.size());
  return forward(input, nullptr);
}

double NeuralModel::predict(const FeatureVector& state) const {
  const auto flat = state.flatten();
  return predict(flat);
}

double NeuralModel::accumulate_gradient(std::span<const double> input, double target,
                                        double scale, std::vector<double>& grad,
                                        std::vector<std::vector<double>>& activations) const {
  const double pred = forward(input, &activations);
  const double err = pred - target;

  // Offset of each layer's block in the flat parameter vector.
  std::vector<std::size_t> offset(layers_.size());
  std::size_t acc = 0;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    offset[li] = acc;
    acc += layers_[li].weights.size() + layers_[li].bias.size();
  }

  std::vector<double> delta{scale * err};
  std::vector<double> prev_delta;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const auto& l = layers_[li];
    const auto& a_in = activations[li];
    double* gw = grad.data() + offset[li];
    double* gb = gw + l.weights.size();
    for (std::size_t o = 0; o < l.outputs; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      double* row = gw + o * l.inputs;
      for (std::size_t i = 0; i < l.inputs; ++i) row[i] += d * a_in[i];
      gb[o] += d;
    }
    if (li == 0) break;
    prev_delta.assign(l.inputs, 0.0);
    for (std::size_t o = 0; o < l.outputs; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      const double* row = l.weights.data() + o * l.inputs;
      for (std::size_t i = 0; i < l.inputs; ++i) prev_delta[i] += row[i] * d;
    }
    for (std::size_t i = 0; i < l.inputs; ++i) {
      if (!(a_in[i] > 0.0)) prev_delta[i] = 0.0;  // rectifier gate
    }
    delta.swap(prev_delta);
  }
  return err * err;
}

double NeuralModel::loss(std::span<const Experience> batch) const {
  if (batch.empty()) throw InvalidArgument("loss of an empty batch");
  double sum = 0.0;
  for (const auto& e : batch) {
    const double err = predict(e.state) - e.reward;
    sum += err * err;
  }
  return sum / static_cast<double>(batch.size());
}

std::vector<double> NeuralModel::gradient(std::span<const Experience> batch) const {
  if (batch.empty()) throw InvalidArgument("gradient of an empty batch");
  std::vector<double> grad(parameter_count(), 0.0);
  std::vector<std::vector<double>> activations;
  const double scale = 2.0 / static_cast<double>(batch.size());
  for (const auto& e : batch) {
    const auto x = e.state.flatten();
    check_input(x.size());
    accumulate_gradient(x, e.reward, scale, grad, activations);
  }
  return grad;
}

std::vector<double> NeuralModel::parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const auto& l : layers_) {
    out.insert(out.end(), l.weights.begin(), l.weights.end());
    out.insert(out.end(), l.bias.begin(), l.bias.end());
  }
  return out;
}

void NeuralModel::set_parameters(std::span<const double> params) {
  if (params.size() != parameter_count()) {
    throw InvalidArgument("parameter vector has wrong length");
  }
  std::size_t k = 0;
  for (auto& l : layers_) {
    for (auto& w : l.weights) w = params[k++];
    for (auto& b : l.bias) b = params[k++];
  }
}

std::size_t NeuralModel::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
  return n;
}

std::vector<std::size_t> NeuralModel::hidden_layers() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < layers_.size(); ++i) out.push_back(layers_[i].outputs);
  return out;
}

double fit_neural(NeuralModel& model, std::span<const Experience> batch,
                  const NeuralTrainOptions& options) {
  if (batch.empty()) throw InvalidArgument("fit_neural needs a non-empty batch");
  if (!(options.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  const std::size_t mb = std::max<std::size_t>(1, options.minibatch_size);

  std::vector<std::vector<double>> inputs;
  inputs.reserve(batch.size());
  for (const auto& e : batch) {
    inputs.push_back(e.state.flatten());
    if (inputs.back().size() != model.input_dimension()) {
      throw ConfigError("state dimension does not match network input");
    }
  }

  std::vector<double> params = model.parameters();
  std::vector<double> grad(params.size());
  std::vector<std::vector<double>> activations;
  double epoch_loss = 0.0;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    double sq_sum = 0.0;
    for (std::size_t start = 0; start < batch.size(); start += mb) {
      const std::size_t end = std::min(batch.size(), start + mb);
      const double scale = 2.0 / static_cast<double>(end - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = start; i < end; ++i) {
        sq_sum += model.accumulate_gradient(inputs[i], batch[i].reward, scale, grad,
                                            activations);
      }
      for (std::size_t k = 0; k < params.size(); ++k) {
        params[k] -= options.learning_rate * grad[k];
      }
      model.set_parameters(params);
    }
    epoch_loss = sq_sum / static_cast<double>(batch.size());
    if (!std::isfinite(epoch_loss) ||
        !std::all_of(params.begin(), params.end(), [](double v) { return std::isfinite(v); })) {
      throw DivergenceError("neural training diverged (non-finite loss); lower the learning rate");
    }
  }
  return epoch_loss;
}

}  // namespace tcprio
