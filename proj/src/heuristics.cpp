#include "paintshop/heuristics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace paintshop {

namespace {

constexpr std::int64_t kFillDenominator = 1'000'000;

enum class Phase { Store, Retrieve };

}  // namespace

FillFraction FillFraction::from_double(double value) {
  return {static_cast<std::int64_t>(std::llround(value * static_cast<double>(kFillDenominator))), kFillDenominator};
}

FillBounds FillBounds::from_double(double upper, double lower) {
  FillBounds b{FillFraction::from_double(upper), FillFraction::from_double(lower)};
  b.validate();
  return b;
}

void FillBounds::validate() const {
  const FillFraction zero{0, 1};
  const FillFraction one{1, 1};
  if (upper < zero || upper > one || lower < zero || lower > one) throw Error("fill bounds must lie in [0, 1]");
  if (lower > upper) throw Error("lower fill bound exceeds upper bound");
}

std::string FillBounds::to_string() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "fu=%.4g;fl=%.4g", upper.value(), lower.value());
  return buf;
}

int greedy_store_lane(const ShopState& s) {
  const Color e = s.incoming();
  for (int i = 0; i < s.lanes(); ++i) {
    if (!s.lane_empty(i) && !s.lane_full(i) && s.rear_color(i) == e) return i;
  }
  int best = -1;
  for (int i = 0; i < s.lanes(); ++i) {
    if (s.lane_full(i)) continue;
    if (best < 0 || s.lane_count(i) < s.lane_count(best)) best = i;
  }
  return best;
}

int greedy_retrieve_lane(const ShopState& s) {
  const Color p = s.current_color();
  if (p != kEmpty) {
    for (int i = 0; i < s.lanes(); ++i) {
      if (s.exit_color(i) == p) return i;
    }
  }
  for (int i = 0; i < s.lanes(); ++i) {
    if (!s.lane_empty(i)) return i;
  }
  return -1;
}

Solution greedy_fill_rate_solve(const Instance& instance, const FillBounds& bounds) {
  bounds.validate();
  Stopwatch clock;
  ShopState s = new_state(instance);
  const int capacity = instance.buffer_size();
  std::vector<Action> actions;
  actions.reserve(2 * instance.total_cars());

  Phase phase = (s.upstream_remaining() > 0 && (s.buffered() == 0 || bounds.upper.fill_below(s.buffered(), capacity)))
                    ? Phase::Store
                    : Phase::Retrieve;
  while (!is_terminal(s)) {
    if (phase == Phase::Store) {
      if (s.upstream_remaining() == 0 || s.buffer_full()) {
        phase = Phase::Retrieve;
        continue;
      }
      const Action a = Action::store(greedy_store_lane(s));
      s.advance(a);
      actions.push_back(a);
      if (s.upstream_remaining() == 0 || bounds.upper.fill_at_least(s.buffered(), capacity)) phase = Phase::Retrieve;
    } else {
      if (s.buffered() == 0) {
        phase = Phase::Store;
        continue;
      }
      const Action a = Action::retrieve(greedy_retrieve_lane(s));
      s.advance(a);
      actions.push_back(a);
      if (s.upstream_remaining() > 0 && bounds.lower.fill_at_most(s.buffered(), capacity)) phase = Phase::Store;
    }
  }
  return make_solution(instance, std::move(actions), "greedy-fill", clock.seconds());
}

Solution greedy_solve(const Instance& instance) {
  Stopwatch clock;
  Solution s = greedy_fill_rate_solve(instance, FillBounds{});
  s.producer = "greedy";
  s.runtime_seconds = clock.seconds();
  return s;
}

FillRateGridResult greedy_fill_rate_grid(const Instance& instance, double step) {
  if (!(step > 0.0) || step > 1.0) throw Error("grid step must lie in (0, 1]");
  Stopwatch clock;
  const FillFraction unit = FillFraction::from_double(step);
  const std::int64_t points = unit.den / unit.num;  // values 0, step, ..., points*step <= 1

  FillRateGridResult best;
  int best_changes = std::numeric_limits<int>::max();
  for (std::int64_t u = 0; u <= points; ++u) {
    for (std::int64_t l = 0; l <= u; ++l) {
      FillBounds b{{u * unit.num, unit.den}, {l * unit.num, unit.den}};
      Solution s = greedy_fill_rate_solve(instance, b);
      ++best.evaluated;
      if (s.color_changes < best_changes) {
        best_changes = s.color_changes;
        best.solution = std::move(s);
        best.bounds = b;
      }
    }
  }
  best.solution.producer = "greedy-fill-grid";
  best.solution.runtime_seconds = clock.seconds();
  return best;
}

}  // namespace paintshop
