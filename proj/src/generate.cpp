#include "paintshop/generate.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace paintshop {

ColorDistribution ColorDistribution::parse(std::string_view name) {
  if (name == "balanced") return balanced();
  if (name == "exponential") return exponential();
  if (name == "linear") return linear();
  throw Error("unknown color distribution '" + std::string(name) + "' (balanced, exponential, linear)");
}

std::string ColorDistribution::name() const {
  switch (kind) {
    case Kind::Balanced:
      return "balanced";
    case Kind::Exponential:
      return "exponential";
    case Kind::Linear:
      return "linear";
  }
  return "balanced";
}

double ColorDistribution::slope_for(int num_colors) const {
  if (slope) return *slope;
  switch (num_colors) {
    case 5:
      return 0.08;
    case 10:
      return 0.02;
    case 15:
      return 0.008;
    default:
      return num_colors > 1 ? 1.0 / (num_colors * (num_colors - 1.0)) : 0.0;
  }
}

std::vector<double> ColorDistribution::probabilities(int num_colors) const {
  if (num_colors < 1) throw InvalidInstance("num_colors must be >= 1");
  const auto n = static_cast<std::size_t>(num_colors);
  std::vector<double> p(n);
  switch (kind) {
    case Kind::Balanced:
      for (auto& v : p) v = 1.0 / num_colors;
      break;
    case Kind::Exponential: {
      if (!(decay > 0.0 && decay < 1.0)) throw InvalidInstance("exponential decay must lie in (0, 1)");
      p[0] = (1.0 - decay) / (1.0 - std::pow(decay, num_colors));
      for (std::size_t i = 1; i < n; ++i) p[i] = p[i - 1] * decay;
      break;
    }
    case Kind::Linear: {
      const double d = slope_for(num_colors);
      if (d < 0.0) throw InvalidInstance("linear slope must be non-negative");
      if (num_colors > 1 && !(d < 2.0 / (num_colors * (num_colors - 1.0)))) {
        throw InvalidInstance("linear slope must be below 2 / (C (C - 1)) so that p_C > 0");
      }
      p[0] = 1.0 / num_colors + d * (num_colors - 1) / 2.0;
      for (std::size_t i = 1; i < n; ++i) p[i] = p[0] - d * static_cast<double>(i);
      break;
    }
  }
  for (double v : p) {
    if (!(v > 0.0)) throw InvalidInstance("color probabilities must be positive");
  }
  return p;
}

Instance generate_instance(int num_colors, int seq_len, int lanes, int width, const ColorDistribution& dist,
                           std::uint64_t seed, bool fill) {
  if (seq_len < 0) throw InvalidInstance("sequence length must be >= 0");
  const std::vector<double> p = dist.probabilities(num_colors);
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> draw(p.begin(), p.end());

  Instance inst;
  inst.num_colors = num_colors;
  inst.lanes = lanes;
  inst.width = width;
  inst.meta.distribution = dist.name();
  inst.meta.seed = seed;
  inst.upstream.reserve(static_cast<std::size_t>(seq_len));
  for (int i = 0; i < seq_len; ++i) inst.upstream.push_back(draw(rng) + 1);
  if (fill) {
    inst.initial_buffer.assign(static_cast<std::size_t>(lanes), {});
    for (auto& lane : inst.initial_buffer) {
      for (int j = 0; j < width; ++j) lane.push_back(draw(rng) + 1);
    }
  }
  inst.validate();
  return inst;
}

std::optional<std::string> generation_warning(int num_colors, int lanes) {
  if (lanes >= num_colors) {
    return "lanes (" + std::to_string(lanes) + ") >= colors (" + std::to_string(num_colors) +
           "): more lanes than colors makes the problem easy";
  }
  return std::nullopt;
}

std::string instance_id(const Instance& instance) {
  std::ostringstream id;
  id << 'C' << instance.num_colors << "-L" << instance.lanes << "xW" << instance.width << "-N"
     << instance.upstream.size() << '-' << instance.meta.distribution << "-s" << instance.meta.seed;
  if (instance.initial_cars() > 0) id << "-fill";
  return id.str();
}

}  // namespace paintshop
