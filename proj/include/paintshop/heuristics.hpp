#pragma once

#include <cstdint>
#include <string>

#include "paintshop/core.hpp"

namespace paintshop {

// Fill-rate bound kept as an exact fraction so that threshold comparisons
// against (cars buffered) / (L * W) never jitter.
struct FillFraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static FillFraction from_double(double value);
  [[nodiscard]] double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  // cars / capacity  <=>  this, compared exactly.
  [[nodiscard]] bool fill_at_least(int cars, int capacity) const { return cars * den >= num * capacity; }
  [[nodiscard]] bool fill_at_most(int cars, int capacity) const { return cars * den <= num * capacity; }
  [[nodiscard]] bool fill_below(int cars, int capacity) const { return !fill_at_least(cars, capacity); }

  auto operator<=>(const FillFraction& o) const { return num * o.den <=> o.num * den; }
  bool operator==(const FillFraction& o) const { return num * o.den == o.num * den; }
};

struct FillBounds {
  FillFraction upper{1, 1};  // F_u
  FillFraction lower{0, 1};  // F_l

  static FillBounds from_double(double upper, double lower);
  void validate() const;
  [[nodiscard]] std::string to_string() const;
};

// Store rule shared by the greedy family: greedy storage (lowest qualifying
// lane) if possible, else the least occupied lane, ties to the lowest index.
int greedy_store_lane(const ShopState& state);
// Retrieve rule: greedy retrieval (lowest matching lane) if possible, else the
// lowest-index nonempty lane.
int greedy_retrieve_lane(const ShopState& state);

Solution greedy_solve(const Instance& instance);
Solution greedy_fill_rate_solve(const Instance& instance, const FillBounds& bounds);

struct FillRateGridResult {
  Solution solution;
  FillBounds bounds;
  std::size_t evaluated = 0;
};

// Sweeps F_u, F_l over {0, step, 2*step, ...} up to 1 with F_l <= F_u.
FillRateGridResult greedy_fill_rate_grid(const Instance& instance, double step = 0.01);

}  // namespace paintshop
