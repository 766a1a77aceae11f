#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paintshop/core.hpp"

namespace paintshop {

struct ColorDistribution {
  enum class Kind { Balanced, Exponential, Linear };

  Kind kind = Kind::Balanced;
  double decay = 0.8;           // exponential: p_{i+1} = decay * p_i
  std::optional<double> slope;  // linear: p_{i+1} = p_i - slope; default depends on C

  static ColorDistribution balanced() { return {}; }
  static ColorDistribution exponential(double decay = 0.8) { return {Kind::Exponential, decay, std::nullopt}; }
  static ColorDistribution linear(std::optional<double> slope = std::nullopt) {
    return {Kind::Linear, 0.8, slope};
  }
  static ColorDistribution parse(std::string_view name);

  [[nodiscard]] std::string name() const;
  // Linear slope used for C colors: the configured one, else 0.08 / 0.02 /
  // 0.008 for C = 5 / 10 / 15, else 1 / (C (C - 1)).
  [[nodiscard]] double slope_for(int num_colors) const;
  // Throws InvalidInstance if some p_i <= 0.
  [[nodiscard]] std::vector<double> probabilities(int num_colors) const;
};

// i.i.d. colors; with `fill`, L*W more cars are drawn the same way and loaded
// right-packed into the buffer.
Instance generate_instance(int num_colors, int seq_len, int lanes, int width, const ColorDistribution& dist,
                           std::uint64_t seed, bool fill = false);

// Set when L >= C, which the generator allows but does not recommend.
std::optional<std::string> generation_warning(int num_colors, int lanes);

// "C5-L2xW2-N20-balanced-s7" (with "-fill" appended for filled buffers).
std::string instance_id(const Instance& instance);

}  // namespace paintshop
