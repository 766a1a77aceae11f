#include <functional>
#include <map>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "paintshop/exact.hpp"
#include "paintshop/heuristics.hpp"

using namespace paintshop;

namespace {

// Store-then-retrieve optimum on a plain model: fill until the buffer is
// full or the upstream is exhausted, then empty completely, repeat.
int str_oracle(const Instance& inst) {
  using Lanes = std::vector<std::vector<Color>>;  // front = exit
  std::map<std::tuple<Lanes, std::size_t, Color, bool>, int> memo;
  const std::size_t n = inst.upstream.size();
  const int cap = inst.buffer_size();
  std::function<int(const Lanes&, std::size_t, Color, bool)> go = [&](const Lanes& lanes, std::size_t pos,
                                                                       Color last, bool storing) -> int {
    int held = 0;
    for (const auto& l : lanes) held += static_cast<int>(l.size());
    if (held == 0 && pos == n) return 0;
    const auto key = std::make_tuple(lanes, pos, last, storing);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int best = 1 << 29;
    if (storing) {
      for (std::size_t i = 0; i < lanes.size(); ++i) {
        if (static_cast<int>(lanes[i].size()) == inst.width) continue;
        Lanes next = lanes;
        next[i].push_back(inst.upstream[pos]);
        const bool still = held + 1 < cap && pos + 1 < n;
        best = std::min(best, go(next, pos + 1, last, still));
      }
    } else {
      for (std::size_t i = 0; i < lanes.size(); ++i) {
        if (lanes[i].empty()) continue;
        Lanes next = lanes;
        const Color c = next[i].front();
        next[i].erase(next[i].begin());
        const int cost = last != kEmpty && c != last ? 1 : 0;
        best = std::min(best, cost + go(next, pos, c, held == 1 && pos < n));
      }
    }
    memo[key] = best;
    return best;
  };
  Lanes start(static_cast<std::size_t>(inst.lanes));
  int held = 0;
  for (std::size_t i = 0; i < inst.initial_buffer.size(); ++i) {
    start[i].assign(inst.initial_buffer[i].rbegin(), inst.initial_buffer[i].rend());
    held += static_cast<int>(start[i].size());
  }
  return go(start, 0, kEmpty, n > 0 && held < cap);
}

}  // namespace

TEST_SUITE("exact") {
  TEST_CASE("example: flexible 1, store-then-retrieve 3") {
    const auto flex = solve_exact(testutil::example1());
    CHECK(flex.proven_optimal);
    CHECK(flex.solution.color_changes == 1);
    const auto str = solve_exact_store_then_retrieve(testutil::example1());
    CHECK(str.proven_optimal);
    CHECK(str.solution.color_changes == 3);
    CHECK(str_oracle(testutil::example1()) == 3);
  }

  TEST_CASE("flexible optimum equals brute force") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 150; ++t) {
      const Instance inst = testutil::random_tiny(rng, 8, 2, 2, 3, true);
      const auto r = solve_exact(inst);
      REQUIRE(r.proven_optimal);
      CHECK(r.solution.color_changes == testutil::BruteForce(inst).optimum());
      CHECK(replay(inst, r.solution.actions).color_changes == r.solution.color_changes);
    }
  }

  TEST_CASE("store-then-retrieve optimum equals its oracle") {
    std::mt19937_64 rng(18);
    for (int t = 0; t < 150; ++t) {
      const Instance inst = testutil::random_tiny(rng, 8, 2, 2, 3, true);
      const auto r = solve_exact_store_then_retrieve(inst);
      REQUIRE(r.proven_optimal);
      CHECK(r.solution.color_changes == str_oracle(inst));
      CHECK(r.solution.color_changes >= solve_exact(inst).solution.color_changes);
    }
  }

  TEST_CASE("search options agree") {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 60; ++t) {
      const Instance inst = testutil::random_tiny(rng, 7, 2, 2, 3);
      const int reference = solve_exact(inst).solution.color_changes;
      SearchOptions plain;
      plain.memoize = false;
      CHECK(solve_exact(inst, {}, plain).solution.color_changes == reference);
      SearchOptions nosym;
      nosym.symmetry_reduction = false;
      CHECK(solve_exact(inst, {}, nosym).solution.color_changes == reference);
      SearchOptions dom;
      dom.dominance_pruning = true;
      CHECK(solve_exact(inst, {}, dom).solution.color_changes == reference);
    }
  }

  TEST_CASE("limits return the incumbent") {
    const Instance inst = gap_family(3);
    SearchLimits limits;
    limits.max_nodes = 2;
    const auto r = solve_exact(inst, limits);
    CHECK_FALSE(r.proven_optimal);
    CHECK(r.solution.color_changes <= greedy_solve(inst).color_changes);
    CHECK(replay(inst, r.solution.actions).color_changes == r.solution.color_changes);
  }

  TEST_CASE("cost-to-go from intermediate states") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 60; ++t) {
      const Instance inst = testutil::random_tiny(rng, 7, 2, 2, 3);
      CostToGo ctg(inst);
      testutil::BruteForce oracle(inst);
      ShopState s = new_state(inst);
      std::vector<Action> prefix;
      int paid = 0;
      while (!is_terminal(s)) {
        CHECK(paid + ctg.optimum(s) == oracle.optimum_after(prefix));
        const auto options = testutil::legal_actions(s);
        const Action a = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
        const Color before = s.current_color();
        s.advance(a);
        if (!a.is_store() && before != kEmpty && s.current_color() != before) ++paid;
        prefix.push_back(a);
      }
    }
  }

  TEST_CASE("gap family shape") {
    const Instance inst = gap_family(2);
    CHECK(inst.upstream == std::vector<Color>{2, 1, 1, 1, 2, 1, 1, 1});
    CHECK(inst.lanes == 2);
    CHECK(inst.width == 2);
    CHECK_THROWS_AS(gap_family(0), Error);
  }
}
