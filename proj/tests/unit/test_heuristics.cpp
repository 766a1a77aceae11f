#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "paintshop/heuristics.hpp"

using namespace paintshop;

TEST_SUITE("heuristics") {
  TEST_CASE("greedy on the example") {
    const Solution s = greedy_solve(testutil::example1());
    CHECK(s.color_changes == 3);
    CHECK(replay(testutil::example1(), s.actions).color_changes == 3);
    CHECK(s.producer == "greedy");
  }

  TEST_CASE("fill-rate greedy with bounds (1, 0) is the plain greedy") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
      const Instance inst = testutil::random_tiny(rng, 12, 3, 3, 4, true);
      CHECK(greedy_fill_rate_solve(inst, FillBounds{}).actions == greedy_solve(inst).actions);
    }
  }

  TEST_CASE("bounds (0, 0) alternate store and retrieve") {
    const auto inst = testutil::make_instance(3, 2, 2, {1, 2, 3, 1});
    const Solution s = greedy_fill_rate_solve(inst, FillBounds::from_double(0, 0));
    REQUIRE(s.actions.size() == 8);
    for (std::size_t i = 0; i < s.actions.size(); ++i) CHECK(s.actions[i].is_store() == (i % 2 == 0));
  }

  TEST_CASE("greedy storage prefers the lane whose rear car matches") {
    const auto inst = testutil::make_instance(3, 3, 3, {2, 3, 2});
    ShopState s = new_state(inst);
    s.advance(Action::store(greedy_store_lane(s)));  // 2 -> lane 0
    s.advance(Action::store(greedy_store_lane(s)));  // 3 -> lane 1 (least occupied)
    CHECK(s.lane_count(1) == 1);
    CHECK(greedy_store_lane(s) == 0);
  }

  TEST_CASE("fill fractions compare exactly") {
    const FillFraction f = FillFraction::from_double(0.5);
    CHECK(f.fill_at_least(2, 4));
    CHECK(f.fill_at_most(2, 4));
    CHECK(f.fill_below(1, 4));
    CHECK(FillFraction::from_double(0.3) < FillFraction::from_double(0.31));
    CHECK_THROWS_AS(FillBounds::from_double(0.2, 0.5), Error);
    CHECK_THROWS_AS(FillBounds::from_double(1.5, 0.5), Error);
  }

  TEST_CASE("all fill-rate variants replay validly") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
      const Instance inst = testutil::random_tiny(rng, 15, 3, 3, 5, true);
      for (double u : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        for (double l : {0.0, 0.25, 0.5}) {
          if (l > u) continue;
          const Solution s = greedy_fill_rate_solve(inst, FillBounds::from_double(u, l));
          CHECK(replay(inst, s.actions).color_changes == s.color_changes);
        }
      }
    }
  }

  TEST_CASE("grid search covers the greedy bounds") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 30; ++t) {
      const Instance inst = testutil::random_tiny(rng, 15, 3, 3, 5);
      const auto grid = greedy_fill_rate_grid(inst, 0.5);
      CHECK(grid.evaluated == 6);
      CHECK(grid.solution.color_changes <= greedy_solve(inst).color_changes);
      CHECK(grid.bounds.lower <= grid.bounds.upper);
    }
  }
}
