#include "paintshop/msa.hpp"

#include <limits>

#include "paintshop/heuristics.hpp"

namespace paintshop {

namespace {

constexpr int kUnknown = -1;

// Dense memo over (per-lane retrieved counts, last lane). The last-lane slot
// `lanes` stands for "nothing retrieved yet".
class InterleavingDp {
 public:
  InterleavingDp(const LaneQueues& queues, Color start_color, std::size_t limit)
      : queues_(queues), start_color_(start_color) {
    const std::size_t lanes = queues.size();
    stride_.resize(lanes);
    std::size_t tuples = 1;
    for (std::size_t i = 0; i < lanes; ++i) {
      stride_[i] = tuples;
      const std::size_t radix = queues[i].size() + 1;
      if (tuples > limit / radix) throw Error("optimal_retrieval state space exceeds the configured limit");
      tuples *= radix;
    }
    if (tuples > limit / (lanes + 1)) throw Error("optimal_retrieval state space exceeds the configured limit");
    memo_.assign(tuples * (lanes + 1), kUnknown);
    counts_.assign(lanes, 0);
  }

  int solve(std::size_t tuple, std::size_t last) {
    int& slot = memo_[tuple * (queues_.size() + 1) + last];
    if (slot != kUnknown) return slot;
    ++states_;
    const Color prev = previous_color(last);
    int best = std::numeric_limits<int>::max();
    bool any = false;
    for (std::size_t i = 0; i < queues_.size(); ++i) {
      if (counts_[i] == queues_[i].size()) continue;
      any = true;
      const Color c = queues_[i][counts_[i]];
      const int cost = (prev != kEmpty && c != prev) ? 1 : 0;
      ++counts_[i];
      const int v = cost + solve(tuple + stride_[i], i);
      --counts_[i];
      if (v < best) best = v;
    }
    slot = any ? best : 0;
    return slot;
  }

  RetrievalPlan plan() {
    RetrievalPlan out;
    const std::size_t lanes = queues_.size();
    out.color_changes = solve(0, lanes);
    std::size_t tuple = 0;
    std::size_t last = lanes;
    int remaining = out.color_changes;
    for (;;) {
      const Color prev = previous_color(last);
      std::size_t chosen = lanes;
      for (std::size_t i = 0; i < lanes; ++i) {
        if (counts_[i] == queues_[i].size()) continue;
        const Color c = queues_[i][counts_[i]];
        const int cost = (prev != kEmpty && c != prev) ? 1 : 0;
        ++counts_[i];
        const int v = cost + solve(tuple + stride_[i], i);
        --counts_[i];
        if (v == remaining) {
          chosen = i;
          remaining -= cost;
          break;
        }
      }
      if (chosen == lanes) break;
      out.lane_order.push_back(static_cast<int>(chosen));
      ++counts_[chosen];
      tuple += stride_[chosen];
      last = chosen;
    }
    out.states = states_;
    return out;
  }

 private:
  Color previous_color(std::size_t last) const {
    if (last == queues_.size()) return start_color_;
    return queues_[last][counts_[last] - 1];
  }

  const LaneQueues& queues_;
  Color start_color_;
  std::vector<std::size_t> stride_;
  std::vector<int> memo_;
  std::vector<std::size_t> counts_;
  std::size_t states_ = 0;
};

}  // namespace

RetrievalPlan optimal_retrieval(const LaneQueues& queues, Color start_color, std::size_t state_limit) {
  std::size_t total = 0;
  for (const auto& q : queues) total += q.size();
  if (total == 0) throw EmptyBuffer();
  InterleavingDp dp(queues, start_color, state_limit);
  return dp.plan();
}

LaneQueues exit_first_queues(const ShopState& state) {
  LaneQueues queues(static_cast<std::size_t>(state.lanes()));
  for (int i = 0; i < state.lanes(); ++i) {
    auto& q = queues[static_cast<std::size_t>(i)];
    for (int j = state.width() - 1; j >= state.width() - state.lane_count(i); --j) q.push_back(state.cell(i, j));
  }
  return queues;
}

Solution msa_solve(const Instance& instance) {
  Stopwatch clock;
  ShopState s = new_state(instance);
  std::vector<Action> actions;
  actions.reserve(2 * instance.total_cars());
  while (!is_terminal(s)) {
    while (s.upstream_remaining() > 0 && !s.buffer_full()) {
      const Action a = Action::store(greedy_store_lane(s));
      s.advance(a);
      actions.push_back(a);
    }
    const RetrievalPlan plan = optimal_retrieval(exit_first_queues(s), s.current_color());
    for (int lane : plan.lane_order) {
      const Action a = Action::retrieve(lane);
      s.advance(a);
      actions.push_back(a);
    }
  }
  return make_solution(instance, std::move(actions), "msa", clock.seconds());
}

}  // namespace paintshop
