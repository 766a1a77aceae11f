#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace paintshop {

// Colors are 1..C. Zero marks an empty buffer cell, an exhausted upstream
// position, or "nothing painted yet".
using Color = int;
inline constexpr Color kEmpty = 0;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

struct InstanceMeta {
  std::string distribution = "unspecified";
  std::uint64_t seed = 0;

  bool operator==(const InstanceMeta&) const = default;
};

// Immutable problem definition.
struct Instance {
  int num_colors = 1;
  int lanes = 1;
  int width = 1;
  std::vector<Color> upstream;
  // Either empty (no initial fill) or exactly `lanes` lists, each ordered
  // entry side first, i.e. the last element sits at the exit.
  std::vector<std::vector<Color>> initial_buffer;
  InstanceMeta meta;

  void validate() const;

  [[nodiscard]] int buffer_size() const { return lanes * width; }
  [[nodiscard]] std::size_t initial_cars() const;
  [[nodiscard]] std::size_t total_cars() const { return upstream.size() + initial_cars(); }

  bool operator==(const Instance&) const = default;
};

enum class ActionKind : std::uint8_t { Retrieve, Store };

// Lanes are 0-based in the API. The flat index space is retrieve 0..L-1,
// store L..2L-1; external formats (JSON, CLI) print lanes 1-based.
struct Action {
  ActionKind kind = ActionKind::Retrieve;
  int lane = 0;

  static constexpr Action store(int lane) { return {ActionKind::Store, lane}; }
  static constexpr Action retrieve(int lane) { return {ActionKind::Retrieve, lane}; }
  static Action from_flat(int index, int lanes);

  [[nodiscard]] int flat(int lanes) const { return kind == ActionKind::Retrieve ? lane : lanes + lane; }
  [[nodiscard]] bool is_store() const { return kind == ActionKind::Store; }
  [[nodiscard]] std::string to_string() const;

  auto operator<=>(const Action&) const = default;
};

// Reward constants of the environment. `change_cost`, when non-empty, is a
// C x C matrix (row = previous color, column = retrieved color, colors
// 1-based mapped to index c-1); a retrieval with a color change then earns
// -change_cost[p-1][c-1] instead of `color_change`.
struct RewardModel {
  double same_color = 1.0;
  double color_change = 0.0;
  double store = 0.0;
  double invalid = -10.0;
  std::vector<std::vector<double>> change_cost;
};

class ShopState {
 public:
  explicit ShopState(std::shared_ptr<const Instance> instance);

  [[nodiscard]] const Instance& instance() const { return *instance_; }
  [[nodiscard]] const std::shared_ptr<const Instance>& instance_ptr() const { return instance_; }
  [[nodiscard]] int lanes() const { return instance_->lanes; }
  [[nodiscard]] int width() const { return instance_->width; }
  [[nodiscard]] int num_colors() const { return instance_->num_colors; }

  // Slot 0 is the entry side, slot width-1 the exit.
  [[nodiscard]] Color cell(int lane, int slot) const {
    return grid_[static_cast<std::size_t>(lane * width() + slot)];
  }
  [[nodiscard]] std::span<const Color> lane(int lane) const {
    return std::span<const Color>(grid_).subspan(static_cast<std::size_t>(lane * width()),
                                                 static_cast<std::size_t>(width()));
  }
  [[nodiscard]] std::span<const Color> grid() const { return grid_; }

  [[nodiscard]] int lane_count(int lane) const { return counts_[static_cast<std::size_t>(lane)]; }
  [[nodiscard]] bool lane_full(int lane) const { return lane_count(lane) == width(); }
  [[nodiscard]] bool lane_empty(int lane) const { return lane_count(lane) == 0; }
  [[nodiscard]] Color exit_color(int lane) const { return cell(lane, width() - 1); }
  // The most recently stored car of the lane, kEmpty for an empty lane.
  [[nodiscard]] Color rear_color(int lane) const;
  [[nodiscard]] int buffered() const { return buffered_; }
  [[nodiscard]] bool buffer_full() const { return buffered_ == instance_->buffer_size(); }

  // e_{t,1+offset}; kEmpty past the end of the upstream sequence.
  [[nodiscard]] Color incoming(std::size_t offset = 0) const;
  [[nodiscard]] std::size_t upstream_pos() const { return upstream_pos_; }
  [[nodiscard]] std::size_t upstream_remaining() const { return instance_->upstream.size() - upstream_pos_; }

  [[nodiscard]] Color current_color() const { return current_color_; }
  [[nodiscard]] const std::vector<Color>& downstream() const { return downstream_; }
  [[nodiscard]] std::size_t step() const { return step_; }

  // Applies `a` in place and returns its reward. Invalid actions leave the
  // state untouched and return model.invalid.
  double advance(Action a, const RewardModel& model = {});

  bool operator==(const ShopState& other) const;

 private:
  std::shared_ptr<const Instance> instance_;
  std::vector<Color> grid_;
  std::vector<int> counts_;
  int buffered_ = 0;
  std::size_t upstream_pos_ = 0;
  Color current_color_ = kEmpty;
  std::vector<Color> downstream_;
  std::size_t step_ = 0;
};

struct Transition {
  ShopState state;
  double reward;
};

struct Solution {
  std::vector<Action> actions;
  std::vector<Color> downstream;
  int color_changes = 0;
  std::string producer;
  double runtime_seconds = 0.0;
};

class ReplayError : public Error {
 public:
  enum class Kind { InvalidAction, NotTerminal };

  ReplayError(Kind kind, std::size_t index);

  [[nodiscard]] Kind kind() const { return kind_; }
  // Offending action index for InvalidAction, number of actions for NotTerminal.
  [[nodiscard]] std::size_t index() const { return index_; }

 private:
  Kind kind_;
  std::size_t index_;
};

ShopState new_state(const Instance& instance);
ShopState new_state(std::shared_ptr<const Instance> instance);

bool legal(const ShopState& state, Action a);
Transition apply(const ShopState& state, Action a, const RewardModel& model = {});
bool is_terminal(const ShopState& state);

// One-hot blocks of length C for every buffer cell (lane-major, entry to
// exit), the next K upstream cars and the current color. Zero encodes as an
// all-zero block.
std::vector<double> encode_observation(const ShopState& state, int lookahead);
std::size_t observation_size(int lanes, int width, int lookahead, int num_colors);

// Adjacent differing pairs; the transition out of "nothing painted" is free.
int color_changes(std::span<const Color> downstream);

Solution replay(const Instance& instance, std::span<const Action> actions);

// Runs `actions` through replay and stamps producer/runtime.
Solution make_solution(const Instance& instance, std::vector<Action> actions, std::string producer,
                       double runtime_seconds);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace paintshop
