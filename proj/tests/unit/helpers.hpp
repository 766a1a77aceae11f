#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <random>
#include <tuple>
#include <vector>

#include "paintshop/core.hpp"

namespace testutil {

using namespace paintshop;

inline Instance make_instance(int colors, int lanes, int width, std::vector<Color> upstream,
                              std::vector<std::vector<Color>> initial = {}) {
  Instance inst;
  inst.num_colors = colors;
  inst.lanes = lanes;
  inst.width = width;
  inst.upstream = std::move(upstream);
  inst.initial_buffer = std::move(initial);
  inst.validate();
  return inst;
}

inline Instance example1() { return make_instance(2, 2, 2, {2, 1, 1, 1, 2, 1, 1, 1}); }

// Tiny random instance: N in [1, max_n], L, W in [1, max_dim], C in [1, max_c].
inline Instance random_tiny(std::mt19937_64& rng, int max_n = 8, int max_lanes = 2, int max_width = 2,
                            int max_colors = 3, bool allow_fill = false) {
  auto pick = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Instance inst;
  inst.num_colors = pick(1, max_colors);
  inst.lanes = pick(1, max_lanes);
  inst.width = pick(1, max_width);
  const int n = pick(1, max_n);
  for (int i = 0; i < n; ++i) inst.upstream.push_back(pick(1, inst.num_colors));
  if (allow_fill && pick(0, 1) == 1) {
    inst.initial_buffer.resize(static_cast<std::size_t>(inst.lanes));
    for (auto& lane : inst.initial_buffer) {
      const int k = pick(0, inst.width);
      for (int j = 0; j < k; ++j) lane.push_back(pick(1, inst.num_colors));
    }
  }
  inst.validate();
  return inst;
}

inline std::vector<Action> legal_actions(const ShopState& s) {
  std::vector<Action> out;
  for (int j = 0; j < 2 * s.lanes(); ++j) {
    const Action a = Action::from_flat(j, s.lanes());
    if (legal(s, a)) out.push_back(a);
  }
  return out;
}

// Uniformly random legal actions until terminal.
inline std::vector<Action> random_walk(const Instance& inst, std::mt19937_64& rng) {
  ShopState s = new_state(inst);
  std::vector<Action> actions;
  while (!is_terminal(s)) {
    const auto options = legal_actions(s);
    const Action a = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    s.advance(a);
    actions.push_back(a);
  }
  return actions;
}

// Independent optimum by exhaustive memoized recursion over a plain deque
// model; shares no code with the library search.
class BruteForce {
 public:
  explicit BruteForce(const Instance& inst) : inst_(inst) {
    lanes_.resize(static_cast<std::size_t>(inst.lanes));
    for (std::size_t i = 0; i < inst.initial_buffer.size(); ++i) {
      // stored entry side first; deque front = exit
      const auto& cars = inst.initial_buffer[i];
      for (auto it = cars.rbegin(); it != cars.rend(); ++it) lanes_[i].push_back(*it);
    }
  }

  int optimum() { return solve(lanes_, 0, kEmpty); }

  // Optimum after forcing `first` from the initial state.
  int optimum_after(const std::vector<Action>& prefix) {
    auto lanes = lanes_;
    std::size_t pos = 0;
    Color last = kEmpty;
    int cost = 0;
    for (const Action& a : prefix) {
      auto& q = lanes[static_cast<std::size_t>(a.lane)];
      if (a.is_store()) {
        q.push_back(inst_.upstream[pos++]);
      } else {
        const Color c = q.front();
        q.pop_front();
        if (last != kEmpty && c != last) ++cost;
        last = c;
      }
    }
    return cost + solve(lanes, pos, last);
  }

 private:
  using Lanes = std::vector<std::deque<Color>>;

  int solve(const Lanes& lanes, std::size_t pos, Color last) {
    bool empty = true;
    for (const auto& q : lanes) empty = empty && q.empty();
    if (empty && pos == inst_.upstream.size()) return 0;
    auto key = std::make_tuple(lanes, pos, last);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    int best = 1 << 29;
    for (std::size_t i = 0; i < lanes.size(); ++i) {
      if (!lanes[i].empty()) {
        Lanes next = lanes;
        const Color c = next[i].front();
        next[i].pop_front();
        best = std::min(best, (last != kEmpty && c != last ? 1 : 0) + solve(next, pos, c));
      }
      if (pos < inst_.upstream.size() && static_cast<int>(lanes[i].size()) < inst_.width) {
        Lanes next = lanes;
        next[i].push_back(inst_.upstream[pos]);
        best = std::min(best, solve(next, pos + 1, last));
      }
    }
    memo_[key] = best;
    return best;
  }

  const Instance& inst_;
  Lanes lanes_;
  std::map<std::tuple<Lanes, std::size_t, Color>, int> memo_;
};

}  // namespace testutil
