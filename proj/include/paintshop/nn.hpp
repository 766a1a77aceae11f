#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace paintshop::nn {

// Fully connected tanh network with a linear output layer. Parameters live in
// a caller-owned flat vector: per layer, the weight matrix (out x in,
// row-major) followed by the bias.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<int> layer_sizes);

  [[nodiscard]] const std::vector<int>& layer_sizes() const { return sizes_; }
  [[nodiscard]] int input_size() const { return sizes_.front(); }
  [[nodiscard]] int output_size() const { return sizes_.back(); }
  [[nodiscard]] std::size_t parameter_count() const { return count_; }

  // Normal(0, gain^2 / fan_in) weights, zero biases; the output layer uses
  // `output_gain`.
  void initialize(std::span<double> params, std::mt19937_64& rng, double output_gain) const;

  struct Cache {
    // activations[0] is the input, activations.back() the output.
    std::vector<std::vector<double>> activations;
  };

  void forward(std::span<const double> params, std::span<const double> input, Cache& cache) const;
  [[nodiscard]] std::vector<double> forward(std::span<const double> params, std::span<const double> input) const;

  // Accumulates d(out . grad_output)/d(params) into `grad`.
  void backward(std::span<const double> params, const Cache& cache, std::span<const double> grad_output,
                std::span<double> grad) const;

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;  // start of each layer's weights
  std::size_t count_ = 0;
};

class Adam {
 public:
  Adam() = default;
  Adam(std::size_t size, double learning_rate);

  // Gradient descent step on `params`.
  void step(std::span<double> params, std::span<const double> grad);
  [[nodiscard]] double learning_rate() const { return lr_; }
  void set_learning_rate(double lr) { lr_ = lr; }

 private:
  double lr_ = 3e-4;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  std::vector<double> m_;
  std::vector<double> v_;
  long long t_ = 0;
};

}  // namespace paintshop::nn
