#include "paintshop/core.hpp"

namespace paintshop {

namespace {

void check_color(Color c, int num_colors, const char* where) {
  if (c < 1 || c > num_colors) {
    throw InvalidInstance(std::string(where) + ": color " + std::to_string(c) + " outside 1.." +
                          std::to_string(num_colors));
  }
}

}  // namespace

void Instance::validate() const {
  if (num_colors < 1) throw InvalidInstance("num_colors must be positive");
  if (lanes < 1) throw InvalidInstance("lanes must be positive");
  if (width < 1) throw InvalidInstance("width must be positive");
  if (upstream.empty()) throw InvalidInstance("upstream sequence must not be empty");
  for (Color c : upstream) check_color(c, num_colors, "upstream");
  if (initial_buffer.empty()) return;
  if (static_cast<int>(initial_buffer.size()) != lanes) {
    throw InvalidInstance("initial_buffer must list exactly " + std::to_string(lanes) + " lanes");
  }
  for (const auto& lane : initial_buffer) {
    if (static_cast<int>(lane.size()) > width) {
      throw InvalidInstance("initial lane holds " + std::to_string(lane.size()) + " cars but width is " +
                            std::to_string(width));
    }
    for (Color c : lane) check_color(c, num_colors, "initial_buffer");
  }
}

std::size_t Instance::initial_cars() const {
  std::size_t n = 0;
  for (const auto& lane : initial_buffer) n += lane.size();
  return n;
}

Action Action::from_flat(int index, int lanes) {
  if (index < 0 || index >= 2 * lanes) throw Error("flat action index out of range");
  return index < lanes ? retrieve(index) : store(index - lanes);
}

std::string Action::to_string() const {
  return (kind == ActionKind::Store ? "S" : "R") + std::to_string(lane + 1);
}

ShopState::ShopState(std::shared_ptr<const Instance> instance) : instance_(std::move(instance)) {
  const auto& inst = *instance_;
  inst.validate();
  grid_.assign(static_cast<std::size_t>(inst.lanes * inst.width), kEmpty);
  counts_.assign(static_cast<std::size_t>(inst.lanes), 0);
  if (!inst.initial_buffer.empty()) {
    for (int i = 0; i < inst.lanes; ++i) {
      const auto& cars = inst.initial_buffer[static_cast<std::size_t>(i)];
      const int n = static_cast<int>(cars.size());
      // Right-pack toward the exit, entry-side car first.
      for (int k = 0; k < n; ++k) {
        grid_[static_cast<std::size_t>(i * inst.width + inst.width - n + k)] = cars[static_cast<std::size_t>(k)];
      }
      counts_[static_cast<std::size_t>(i)] = n;
      buffered_ += n;
    }
  }
  downstream_.reserve(inst.total_cars());
}

Color ShopState::rear_color(int lane) const {
  const int n = lane_count(lane);
  return n == 0 ? kEmpty : cell(lane, width() - n);
}

Color ShopState::incoming(std::size_t offset) const {
  const auto idx = upstream_pos_ + offset;
  return idx < instance_->upstream.size() ? instance_->upstream[idx] : kEmpty;
}

double ShopState::advance(Action a, const RewardModel& model) {
  if (a.lane < 0 || a.lane >= lanes()) return model.invalid;
  const int w = width();
  const auto base = static_cast<std::size_t>(a.lane * w);
  auto& count = counts_[static_cast<std::size_t>(a.lane)];
  if (a.kind == ActionKind::Store) {
    if (count == w || upstream_pos_ >= instance_->upstream.size()) return model.invalid;
    grid_[base + static_cast<std::size_t>(w - count - 1)] = instance_->upstream[upstream_pos_];
    ++upstream_pos_;
    ++count;
    ++buffered_;
    ++step_;
    return model.store;
  }
  if (count == 0) return model.invalid;
  const Color c = grid_[base + static_cast<std::size_t>(w - 1)];
  for (int j = w - 1; j > w - count; --j) grid_[base + static_cast<std::size_t>(j)] = grid_[base + static_cast<std::size_t>(j - 1)];
  grid_[base + static_cast<std::size_t>(w - count)] = kEmpty;
  --count;
  --buffered_;
  ++step_;
  const Color previous = current_color_;
  current_color_ = c;
  downstream_.push_back(c);
  if (c == previous) return model.same_color;
  if (!model.change_cost.empty() && previous != kEmpty) {
    return -model.change_cost[static_cast<std::size_t>(previous - 1)][static_cast<std::size_t>(c - 1)];
  }
  return model.color_change;
}

bool ShopState::operator==(const ShopState& other) const {
  return (instance_ == other.instance_ || *instance_ == *other.instance_) && grid_ == other.grid_ &&
         upstream_pos_ == other.upstream_pos_ && current_color_ == other.current_color_ && downstream_ == other.downstream_ && step_ == other.step_;
}

ReplayError::ReplayError(Kind kind, std::size_t index)
    : Error(kind == Kind::InvalidAction ? "invalid action at index " + std::to_string(index)
                                        : "actions end in a non-terminal state after " + std::to_string(index) +
                                              " steps"),
      kind_(kind),
      index_(index) {}

ShopState new_state(const Instance& instance) { return ShopState(std::make_shared<const Instance>(instance)); }

ShopState new_state(std::shared_ptr<const Instance> instance) { return ShopState(std::move(instance)); }

bool legal(const ShopState& state, Action a) {
  if (a.lane < 0 || a.lane >= state.lanes()) return false;
  if (a.is_store()) return !state.lane_full(a.lane) && state.upstream_remaining() > 0;
  return !state.lane_empty(a.lane);
}

Transition apply(const ShopState& state, Action a, const RewardModel& model) {
  Transition t{state, 0.0};
  t.reward = t.state.advance(a, model);
  return t;
}

bool is_terminal(const ShopState& state) { return state.upstream_remaining() == 0 && state.buffered() == 0; }

std::size_t observation_size(int lanes, int width, int lookahead, int num_colors) {
  return static_cast<std::size_t>((lanes * width + lookahead + 1) * num_colors);
}

std::vector<double> encode_observation(const ShopState& state, int lookahead) {
  if (lookahead < 1) throw Error("lookahead must be at least 1");
  const int c = state.num_colors();
  std::vector<double> out(observation_size(state.lanes(), state.width(), lookahead, c), 0.0);
  std::size_t block = 0;
  auto put = [&](Color color) {
    if (color != kEmpty) out[block * static_cast<std::size_t>(c) + static_cast<std::size_t>(color - 1)] = 1.0;
    ++block;
  };
  for (Color color : state.grid()) put(color);
  for (int k = 0; k < lookahead; ++k) put(state.incoming(static_cast<std::size_t>(k)));
  put(state.current_color());
  return out;
}

int color_changes(std::span<const Color> downstream) {
  int changes = 0;
  for (std::size_t i = 1; i < downstream.size(); ++i) changes += downstream[i] != downstream[i - 1];
  return changes;
}

Solution replay(const Instance& instance, std::span<const Action> actions) {
  ShopState state = new_state(instance);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (!legal(state, actions[i])) throw ReplayError(ReplayError::Kind::InvalidAction, i);
    state.advance(actions[i]);
  }
  if (!is_terminal(state)) throw ReplayError(ReplayError::Kind::NotTerminal, actions.size());
  Solution s;
  s.actions.assign(actions.begin(), actions.end());
  s.downstream = state.downstream();
  s.color_changes = color_changes(s.downstream);
  return s;
}

Solution make_solution(const Instance& instance, std::vector<Action> actions, std::string producer,
                       double runtime_seconds) {
  Solution s = replay(instance, actions);
  s.producer = std::move(producer);
  s.runtime_seconds = runtime_seconds;
  return s;
}

}  // namespace paintshop
