#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "paintshop/anneal.hpp"
#include "paintshop/exact.hpp"
#include "paintshop/heuristics.hpp"

using namespace paintshop;

namespace {

const Action S1 = Action::store(0), S2 = Action::store(1), R1 = Action::retrieve(0), R2 = Action::retrieve(1);

// Best color count over every within-segment permutation of `base`, by
// enumerating the distinct lane orders of each segment.
int neighborhood_optimum(const Instance& inst, const std::vector<Action>& base) {
  std::vector<std::pair<std::size_t, std::size_t>> segs;
  for (std::size_t i = 0; i < base.size();) {
    std::size_t j = i;
    while (j < base.size() && base[j].kind == base[i].kind) ++j;
    segs.push_back({i, j});
    i = j;
  }
  int best = 1 << 20;
  std::vector<Action> seq = base;
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == segs.size()) {
      best = std::min(best, replay(inst, seq).color_changes);
      return;
    }
    const auto [lo, hi] = segs[k];
    std::vector<int> lanes;
    for (std::size_t i = lo; i < hi; ++i) lanes.push_back(base[i].lane);
    std::sort(lanes.begin(), lanes.end());
    do {
      for (std::size_t i = lo; i < hi; ++i) seq[i].lane = lanes[i - lo];
      self(self, k + 1);
    } while (std::next_permutation(lanes.begin(), lanes.end()));
  };
  rec(rec, 0);
  return best;
}

AnnealConfig generous(std::uint64_t seed) {
  // cools from 2 to 1e-3 over the run
  AnnealConfig cfg;
  cfg.max_iterations = 20000;
  cfg.cutoff_seconds.reset();
  cfg.t0 = 2.0;
  cfg.beta = std::pow(5e-4, 1.0 / 20000);
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_SUITE("anneal") {
  TEST_CASE("segments") {
    const auto segs = segments({S1, S1, R1, R1, S1, R1});
    REQUIRE(segs.size() == 4);
    CHECK(segs[0] == Segment{0, 2, ActionKind::Store});
    CHECK(segs[1] == Segment{2, 2, ActionKind::Retrieve});
    CHECK(segs[2] == Segment{4, 1, ActionKind::Store});
    CHECK(segs[3] == Segment{5, 1, ActionKind::Retrieve});
    CHECK(segments({S1, S2, R1, R2}).size() == 2);
    CHECK(segments({S1, R1, S1, R1}).size() == 4);
    CHECK(segments({}).empty());
  }

  TEST_CASE("perturb swaps within one segment") {
    std::mt19937_64 rng(1);
    const std::vector<Action> in{S1, S2, R1, R2};
    for (int k = 0; k < 20; ++k) {
      const auto out = perturb(in, rng);
      const bool first = out == std::vector<Action>{S2, S1, R1, R2};
      const bool second = out == std::vector<Action>{S1, S2, R2, R1};
      CHECK((first || second));
    }
    const std::vector<Action> singles{S1, R1, S1, R1};
    CHECK(perturb(singles, rng) == singles);
  }

  TEST_CASE("perturbation chains stay feasible") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
      const Instance inst = testutil::random_tiny(rng, 12, 3, 3, 4, true);
      std::vector<Action> actions = testutil::random_walk(inst, rng);
      for (int k = 0; k < 200; ++k) {
        actions = perturb(actions, rng, 1 + k % 3);
        CHECK_NOTHROW(replay(inst, actions));
      }
    }
  }

  TEST_CASE("temperature schedule and acceptance") {
    AnnealConfig cfg;
    cfg.t0 = 10.0;
    cfg.beta = 0.95;
    CHECK(cfg.temperature(2) == doctest::Approx(9.025));
    cfg.time_scale = 2.0;
    CHECK(cfg.temperature(4) == doctest::Approx(9.025));
    CHECK(acceptance_probability(0, 1.0) == 1.0);
    CHECK(acceptance_probability(-3, 1.0) == 1.0);
    CHECK(acceptance_probability(1, 1.0) == doctest::Approx(std::exp(-1.0)));
    AnnealConfig bad;
    bad.beta = 1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad.beta = 0.5;
    bad.t0 = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
  }

  TEST_CASE("default schedule reaches 1e-3 after 1e7 iterations") {
    const AnnealConfig cfg;
    CHECK(cfg.temperature(10'000'000) == doctest::Approx(1e-3).epsilon(1e-6));
  }

  TEST_CASE("incumbent is monotone and never worse than the start") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
      const Instance inst = testutil::random_tiny(rng, 20, 3, 3, 5);
      AnnealConfig cfg;
      cfg.max_iterations = 500;
      cfg.cutoff_seconds.reset();
      cfg.record_trace = true;
      cfg.seed = static_cast<std::uint64_t>(t);
      const auto r = simulated_annealing(inst, cfg);
      for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1]);
      CHECK(r.solution.color_changes <= greedy_solve(inst).color_changes);
      CHECK(replay(inst, r.solution.actions).color_changes == r.solution.color_changes);
    }
  }

  TEST_CASE("seeded runs are identical") {
    const Instance inst = testutil::make_instance(4, 2, 3, {1, 2, 3, 4, 1, 2, 3, 4, 1, 1, 2, 2});
    AnnealConfig cfg;
    cfg.max_iterations = 2000;
    cfg.cutoff_seconds.reset();
    cfg.seed = 42;
    CHECK(simulated_annealing(inst, cfg).solution.actions == simulated_annealing(inst, cfg).solution.actions);
  }

  TEST_CASE("cutoff is honored") {
    std::vector<Color> up;
    std::mt19937_64 rng(4);
    for (int i = 0; i < 60; ++i) up.push_back(1 + static_cast<int>(rng() % 5));
    const Instance mixed = testutil::make_instance(5, 3, 3, up);
    AnnealConfig cfg;
    cfg.cutoff_seconds = 0.2;
    Stopwatch clock;
    simulated_annealing(mixed, cfg);
    CHECK(clock.seconds() < 0.2 * 1.05 + 0.01);
  }

  TEST_CASE("SA finds the best sequence its neighborhood can reach") {
    std::mt19937_64 rng(6);
    int hits = 0;
    for (int t = 0; t < 100; ++t) {
      const Instance inst = testutil::random_tiny(rng, 8, 2, 2, 3);
      const int reachable = neighborhood_optimum(inst, greedy_solve(inst).actions);
      if (simulated_annealing(inst, generous(static_cast<std::uint64_t>(t))).solution.color_changes == reachable) ++hits;
    }
    MESSAGE("SA reached the neighborhood optimum in " << hits << " of 100 runs");
    CHECK(hits >= 95);
  }

  TEST_CASE("tiny instances usually reach the exact optimum") {
    std::mt19937_64 rng(6);
    int hits = 0;
    for (int t = 0; t < 100; ++t) {
      const Instance inst = testutil::random_tiny(rng, 6, 2, 2, 3);
      const int opt = solve_exact(inst).solution.color_changes;
      if (simulated_annealing(inst, generous(static_cast<std::uint64_t>(t))).solution.color_changes == opt) ++hits;
    }
    MESSAGE("SA reached the exact optimum in " << hits << " of 100 runs");
    CHECK(hits >= 95);
  }
}
