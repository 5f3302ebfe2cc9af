#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tcprio/domain.hpp"
#include "tcprio/replay_buffer.hpp"

namespace tcprio {

struct NeuralTrainOptions;

/// Fully connected layer. `weights` is row-major, outputs x inputs.
struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> bias;
};

/// Multilayer perceptron regressor: rectified-linear hidden layers and a
/// single identity output unit.
///
/// The flat parameter vector lists, layer by layer, the weights followed by
/// the biases. `loss` is the mean squared error over a batch and `gradient`
/// its exact derivative with respect to that flat vector.
class NeuralModel {
 public:
  /// Scaled-uniform initialisation, r = sqrt(6 / (fan_in + fan_out)).
  NeuralModel(std::size_t input_dim, std::vector<std::size_t> hidden_layers,
              std::uint64_t seed);

  static NeuralModel zeros(std::size_t input_dim, std::vector<std::size_t> hidden_layers);

  /// Adopts explicit layers. Shapes must chain and end in one output.
  static NeuralModel from_layers(std::vector<DenseLayer> layers);

  double predict(std::span<const double> input) const;
  double predict(const FeatureVector& state) const;

  double loss(std::span<const Experience> batch) const;
  std::vector<double> gradient(std::span<const Experience> batch) const;

  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> params);
  std::size_t parameter_count() const noexcept;

  std::size_t input_dimension() const noexcept { return layers_.front().inputs; }
  std::vector<std::size_t> hidden_layers() const;
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }

 private:
  friend double fit_neural(NeuralModel&, std::span<const Experience>,
                           const NeuralTrainOptions&);

  NeuralModel() = default;
  void check_input(std::size_t dim) const;
  double forward(std::span<const double> input,
                 std::vector<std::vector<double>>* activations) const;
  // Adds scale * err * dpred/dparams for one sample into `grad`; returns err^2.
  double accumulate_gradient(std::span<const double> input, double target, double scale,
                             std::vector<double>& grad,
                             std::vector<std::vector<double>>& activations) const;

  std::vector<DenseLayer> layers_;
};

struct NeuralTrainOptions {
  double learning_rate = 0.05;
  std::size_t epochs = 1;
  std::size_t minibatch_size = 32;
};

/// Mini-batch gradient descent on squared error, visiting the batch in order.
/// Returns the mean loss of the final epoch (measured before each step).
/// Throws InvalidArgument on an empty batch and DivergenceError if the loss
/// or any parameter becomes non-finite.
double fit_neural(NeuralModel& model, std::span<const Experience> batch,
                  const NeuralTrainOptions& options);

}  // namespace tcprio
