#pragma once

#include <cstddef>
#include <vector>

#include "paintshop/core.hpp"

namespace paintshop {

// Each queue lists a lane's cars in the order they leave it (exit first).
using LaneQueues = std::vector<std::vector<Color>>;

struct RetrievalPlan {
  std::vector<int> lane_order;  // 0-based lanes, one entry per car
  int color_changes = 0;
  std::size_t states = 0;       // DP states evaluated
};

class EmptyBuffer : public Error {
 public:
  EmptyBuffer() : Error("optimal_retrieval called on an empty buffer") {}
};

// Minimum adjacent color changes over all interleavings of the FIFO queues,
// starting after `start_color` (kEmpty: the first car is free). Ties break
// toward the lowest lane index at every step.
RetrievalPlan optimal_retrieval(const LaneQueues& queues, Color start_color,
                                std::size_t state_limit = 20'000'000);

LaneQueues exit_first_queues(const ShopState& state);

// Full-fill with the greedy store rule, then empty with optimal_retrieval;
// repeated until the instance is done.
Solution msa_solve(const Instance& instance);

}  // namespace paintshop
