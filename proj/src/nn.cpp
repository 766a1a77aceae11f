#include "paintshop/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace paintshop::nn {

Mlp::Mlp(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs at least an input and an output layer");
  for (int s : sizes_) {
    if (s < 1) throw std::invalid_argument("Mlp layer sizes must be positive");
  }
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(count_);
    count_ += static_cast<std::size_t>(sizes_[l + 1]) * static_cast<std::size_t>(sizes_[l] + 1);
  }
}

void Mlp::initialize(std::span<double> params, std::mt19937_64& rng, double output_gain) const {
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    const double gain = l + 2 == sizes_.size() ? output_gain : 1.0;
    std::normal_distribution<double> dist(0.0, gain / std::sqrt(static_cast<double>(in)));
    double* w = params.data() + offsets_[l];
    for (std::size_t k = 0; k < in * out; ++k) w[k] = dist(rng);
    for (std::size_t k = 0; k < out; ++k) w[in * out + k] = 0.0;
  }
}

void Mlp::forward(std::span<const double> params, std::span<const double> input, Cache& cache) const {
  const std::size_t layers = sizes_.size();
  cache.activations.resize(layers);
  cache.activations[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    const double* w = params.data() + offsets_[l];
    const double* b = w + in * out;
    const std::vector<double>& x = cache.activations[l];
    std::vector<double>& y = cache.activations[l + 1];
    y.assign(out, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      double acc = b[o];
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) acc += row[i] * x[i];
      y[o] = l + 2 == layers ? acc : std::tanh(acc);
    }
  }
}

std::vector<double> Mlp::forward(std::span<const double> params, std::span<const double> input) const {
  Cache cache;
  forward(params, input, cache);
  return std::move(cache.activations.back());
}

void Mlp::backward(std::span<const double> params, const Cache& cache, std::span<const double> grad_output,
                   std::span<double> grad) const {
  const std::size_t layers = sizes_.size();
  std::vector<double> delta(grad_output.begin(), grad_output.end());
  for (std::size_t l = layers - 1; l-- > 0;) {
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    const double* w = params.data() + offsets_[l];
    double* gw = grad.data() + offsets_[l];
    double* gb = gw + in * out;
    const std::vector<double>& x = cache.activations[l];
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      double* grow = gw + o * in;
      for (std::size_t i = 0; i < in; ++i) grow[i] += d * x[i];
      gb[o] += d;
    }
    if (l == 0) break;
    std::vector<double> prev(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) prev[i] += d * row[i];
    }
    // x = tanh(pre) for hidden layers
    for (std::size_t i = 0; i < in; ++i) prev[i] *= 1.0 - x[i] * x[i];
    delta = std::move(prev);
  }
}

Adam::Adam(std::size_t size, double learning_rate) : lr_(learning_rate), m_(size, 0.0), v_(size, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

}  // namespace paintshop::nn
