#include <algorithm>
#include <deque>
#include <random>

#include "doctest.h"
#include "helpers.hpp"

using namespace paintshop;
using testutil::example1;
using testutil::make_instance;

namespace {

std::vector<Action> example1_trace() {
  const Action s1 = Action::store(0), s2 = Action::store(1), r1 = Action::retrieve(0), r2 = Action::retrieve(1);
  return {s1, s2, r2, s2, r2, s2, r2, s1, s2, r2, s2, r2, s2, r2, r1, r1};
}

std::vector<Color> sorted(std::vector<Color> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("example trace gives one color change") {
    const Solution s = replay(example1(), example1_trace());
    CHECK(s.downstream == std::vector<Color>{1, 1, 1, 1, 1, 1, 2, 2});
    CHECK(s.color_changes == 1);
  }

  TEST_CASE("store into a full lane is reported at its index") {
    const auto inst = make_instance(2, 1, 2, {1, 2, 1});
    const std::vector<Action> trace{Action::store(0), Action::store(0), Action::store(0)};
    try {
      replay(inst, trace);
      FAIL("expected ReplayError");
    } catch (const ReplayError& e) {
      CHECK(e.kind() == ReplayError::Kind::InvalidAction);
      CHECK(e.index() == 2);
    }
  }

  TEST_CASE("leftover cars are NotTerminal") {
    const auto inst = make_instance(2, 1, 2, {1, 2});
    const std::vector<Action> trace{Action::store(0), Action::store(0), Action::retrieve(0)};
    try {
      replay(inst, trace);
      FAIL("expected ReplayError");
    } catch (const ReplayError& e) {
      CHECK(e.kind() == ReplayError::Kind::NotTerminal);
    }
  }

  TEST_CASE("color change counting skips the first car") {
    CHECK(color_changes(std::vector<Color>{}) == 0);
    CHECK(color_changes(std::vector<Color>{3}) == 0);
    CHECK(color_changes(std::vector<Color>{1, 1, 2, 2, 1}) == 2);
  }

  TEST_CASE("instance validation") {
    Instance inst = make_instance(2, 2, 2, {1, 2});
    inst.upstream = {3};
    CHECK_THROWS_AS(inst.validate(), InvalidInstance);
    inst.upstream = {1};
    inst.initial_buffer = {{1, 1, 1}, {}};
    CHECK_THROWS_AS(inst.validate(), InvalidInstance);
    inst.initial_buffer = {{1}};
    CHECK_THROWS_AS(inst.validate(), InvalidInstance);
    inst.initial_buffer = {{1}, {2, 1}};
    CHECK_NOTHROW(inst.validate());
    inst.lanes = 0;
    CHECK_THROWS_AS(inst.validate(), InvalidInstance);
  }

  TEST_CASE("initial buffer loads right-packed, entry side first") {
    const auto inst = make_instance(3, 2, 3, {1}, {{2, 3}, {}});
    const ShopState s = new_state(inst);
    CHECK(s.cell(0, 0) == kEmpty);
    CHECK(s.cell(0, 1) == 2);
    CHECK(s.cell(0, 2) == 3);
    CHECK(s.exit_color(0) == 3);
    CHECK(s.rear_color(0) == 2);
    CHECK(s.lane_empty(1));
    CHECK(s.buffered() == 2);
  }

  TEST_CASE("invalid actions are no-ops with reward -10") {
    const auto inst = make_instance(2, 2, 1, {1, 2});
    ShopState s = new_state(inst);
    const ShopState before = s;
    CHECK(s.advance(Action::retrieve(0)) == doctest::Approx(-10.0));
    CHECK(s == before);
    CHECK(s.advance(Action::store(0)) == doctest::Approx(0.0));
    const ShopState full_lane = s;
    CHECK(s.advance(Action::store(0)) == doctest::Approx(-10.0));
    CHECK(s == full_lane);
  }

  TEST_CASE("rewards: same color 1, change 0, store 0") {
    const auto inst = make_instance(2, 2, 2, {1, 1, 2});
    ShopState s = new_state(inst);
    CHECK(s.advance(Action::store(0)) == 0.0);
    CHECK(s.advance(Action::store(0)) == 0.0);
    CHECK(s.advance(Action::store(1)) == 0.0);
    CHECK(s.advance(Action::retrieve(0)) == 0.0);  // first painted car
    CHECK(s.advance(Action::retrieve(0)) == 1.0);
    CHECK(s.advance(Action::retrieve(1)) == 0.0);
    CHECK(is_terminal(s));
  }

  TEST_CASE("change cost matrix replaces the change reward") {
    const auto inst = make_instance(2, 1, 2, {1, 2});
    RewardModel model;
    model.change_cost = {{0.0, 3.0}, {5.0, 0.0}};
    ShopState s = new_state(inst);
    s.advance(Action::store(0), model);
    s.advance(Action::store(0), model);
    s.advance(Action::retrieve(0), model);
    CHECK(s.advance(Action::retrieve(0), model) == doctest::Approx(-3.0));
  }

  TEST_CASE("apply is pure") {
    const auto inst = make_instance(3, 2, 2, {1, 2, 3, 1});
    const ShopState s = new_state(inst);
    const Transition a = apply(s, Action::store(1));
    const Transition b = apply(s, Action::store(1));
    CHECK(a.state == b.state);
    CHECK(a.reward == b.reward);
    CHECK(s == new_state(inst));
  }

  TEST_CASE("observation encoding") {
    const auto inst = make_instance(3, 2, 2, {2, 3});
    ShopState s = new_state(inst);
    s.advance(Action::store(1));
    const auto obs = encode_observation(s, 3);
    REQUIRE(obs.size() == observation_size(2, 2, 3, 3));
    CHECK(obs.size() == (2 * 2 + 3 + 1) * 3);
    // lane 1 exit slot holds color 2
    const std::size_t cell = (1 * 2 + 1) * 3;
    CHECK(obs[cell + 1] == 1.0);
    // next upstream car is 3; positions past the end are zero blocks
    const std::size_t up = 4 * 3;
    CHECK(obs[up + 2] == 1.0);
    for (std::size_t k = up + 3; k < up + 9; ++k) CHECK(obs[k] == 0.0);
    // nothing painted yet
    for (std::size_t k = up + 9; k < obs.size(); ++k) CHECK(obs[k] == 0.0);
    double total = 0;
    for (double v : obs) total += v;
    CHECK(total == 2.0);
  }

  TEST_CASE("random walks: conservation, FIFO, packing, 2N steps") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
      const Instance inst = testutil::random_tiny(rng, 10, 3, 3, 4, true);
      ShopState s = new_state(inst);
      // shadow FIFO queues (front = exit)
      std::vector<std::deque<std::pair<int, Color>>> shadow(static_cast<std::size_t>(inst.lanes));
      int serial = 0;
      for (std::size_t i = 0; i < inst.initial_buffer.size(); ++i) {
        const auto& cars = inst.initial_buffer[i];
        for (auto it = cars.rbegin(); it != cars.rend(); ++it) shadow[i].push_back({serial++, *it});
      }
      std::size_t steps = 0;
      std::vector<Color> all = inst.upstream;
      for (const auto& lane : inst.initial_buffer) all.insert(all.end(), lane.begin(), lane.end());
      while (!is_terminal(s)) {
        const auto options = testutil::legal_actions(s);
        REQUIRE(!options.empty());
        const Action a = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
        auto& q = shadow[static_cast<std::size_t>(a.lane)];
        if (a.is_store()) {
          q.push_back({serial++, s.incoming()});
        } else {
          q.pop_front();
        }
        s.advance(a);
        ++steps;
        // packing and contents agree with the shadow queues
        std::vector<Color> seen(s.downstream());
        for (int i = 0; i < s.lanes(); ++i) {
          const auto& sq = shadow[static_cast<std::size_t>(i)];
          const int n = s.lane_count(i);
          REQUIRE(n == static_cast<int>(sq.size()));
          for (int j = 0; j < s.width(); ++j) {
            const Color c = s.cell(i, j);
            if (j < s.width() - n) {
              CHECK(c == kEmpty);
            } else {
              CHECK(c == sq[static_cast<std::size_t>(s.width() - 1 - j)].second);
              seen.push_back(c);
            }
          }
        }
        for (std::size_t k = s.upstream_pos(); k < inst.upstream.size(); ++k) seen.push_back(inst.upstream[k]);
        CHECK(sorted(seen) == sorted(all));
      }
      CHECK(s.downstream().size() == all.size());
      if (inst.initial_buffer.empty()) CHECK(steps == 2 * inst.upstream.size());
    }
  }

  TEST_CASE("action flat indexing round-trips") {
    for (int lanes = 1; lanes <= 4; ++lanes) {
      for (int j = 0; j < 2 * lanes; ++j) CHECK(Action::from_flat(j, lanes).flat(lanes) == j);
    }
    CHECK(Action::from_flat(0, 2) == Action::retrieve(0));
    CHECK(Action::from_flat(2, 2) == Action::store(0));
    CHECK(Action::store(1).to_string() == "S2");
    CHECK_THROWS_AS(Action::from_flat(4, 2), Error);
  }
}
