#include <algorithm>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "paintshop/msa.hpp"

using namespace paintshop;

namespace {

// Minimum over every interleaving, enumerated explicitly.
int exhaustive(LaneQueues q, Color last, std::vector<std::size_t>& heads) {
  bool done = true;
  int best = 1 << 29;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (heads[i] == q[i].size()) continue;
    done = false;
    const Color c = q[i][heads[i]++];
    best = std::min(best, (last != kEmpty && c != last ? 1 : 0) + exhaustive(q, c, heads));
    --heads[i];
  }
  return done ? 0 : best;
}

int exhaustive(const LaneQueues& q, Color start) {
  std::vector<std::size_t> heads(q.size(), 0);
  return exhaustive(q, start, heads);
}

}  // namespace

TEST_SUITE("msa") {
  TEST_CASE("matches exhaustive interleaving on random small buffers") {
    std::mt19937_64 rng(21);
    auto pick = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (int t = 0; t < 200; ++t) {
      const int lanes = pick(1, 3);
      const int colors = pick(1, 4);
      LaneQueues q(static_cast<std::size_t>(lanes));
      int total = 0;
      for (auto& lane : q) {
        const int n = pick(0, 3);
        for (int k = 0; k < n; ++k) lane.push_back(pick(1, colors));
        total += n;
      }
      if (total == 0) q[0].push_back(1);
      const Color start = pick(0, colors);
      const RetrievalPlan plan = optimal_retrieval(q, start);
      CHECK(plan.color_changes == exhaustive(q, start));
      // the plan realizes its count
      std::vector<std::size_t> heads(q.size(), 0);
      std::vector<Color> out;
      if (start != kEmpty) out.push_back(start);
      for (int lane : plan.lane_order) out.push_back(q[static_cast<std::size_t>(lane)][heads[static_cast<std::size_t>(lane)]++]);
      CHECK(color_changes(out) == plan.color_changes);
    }
  }

  TEST_CASE("ties break toward the lowest lane") {
    const RetrievalPlan plan = optimal_retrieval({{1}, {1}}, kEmpty);
    CHECK(plan.lane_order == std::vector<int>{0, 1});
  }

  TEST_CASE("start color counts") {
    CHECK(optimal_retrieval({{2, 2}}, 1).color_changes == 1);
    CHECK(optimal_retrieval({{2, 2}}, kEmpty).color_changes == 0);
  }

  TEST_CASE("empty buffer is an error") {
    CHECK_THROWS_AS(optimal_retrieval({{}, {}}, kEmpty), EmptyBuffer);
  }

  TEST_CASE("state limit aborts") { CHECK_THROWS_AS(optimal_retrieval({{1, 2, 1}, {2, 1, 2}}, kEmpty, 3), Error); }

  TEST_CASE("msa solutions replay") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t) {
      const Instance inst = testutil::random_tiny(rng, 15, 3, 3, 4, true);
      const Solution s = msa_solve(inst);
      CHECK(replay(inst, s.actions).color_changes == s.color_changes);
      CHECK(s.producer == "msa");
    }
  }
}
