#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "paintshop/core.hpp"

namespace paintshop {

struct AnnealConfig {
  double t0 = 10.0;
  // T falls from 10 to 1e-3 over 1e7 iterations.
  double beta = 0.999999078966387;
  double time_scale = 1.0;
  std::optional<double> cutoff_seconds = 300.0;
  // Iteration budget; reproducible runs use this instead of a wall-clock cutoff.
  std::optional<std::uint64_t> max_iterations;
  int swaps_per_step = 1;
  std::uint64_t seed = 0;
  // Records the incumbent color changes after every iteration.
  bool record_trace = false;

  void validate() const;
  [[nodiscard]] double temperature(std::uint64_t iteration) const;
};

struct Segment {
  std::size_t start;
  std::size_t length;
  ActionKind kind;

  bool operator==(const Segment&) const = default;
};

// Maximal runs of same-kind actions, in order.
std::vector<Segment> segments(const std::vector<Action>& actions);

// One uniform pairwise swap inside a uniformly chosen segment of length >= 2.
std::vector<Action> perturb(const std::vector<Action>& actions, std::mt19937_64& rng, int swaps = 1);

double acceptance_probability(int delta, double temperature);

struct AnnealResult {
  Solution solution;
  std::uint64_t iterations = 0;
  std::uint64_t accepted = 0;
  std::vector<int> trace;  // incumbent after each iteration (if requested)
};

AnnealResult simulated_annealing(const Instance& instance, const Solution& init, const AnnealConfig& config);
// Starts from greedy_solve.
AnnealResult simulated_annealing(const Instance& instance, const AnnealConfig& config);

}  // namespace paintshop
