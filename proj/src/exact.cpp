#include "paintshop/exact.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_map>

#include "paintshop/heuristics.hpp"

namespace paintshop {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

enum class Phase : std::uint8_t { Free, Store, Retrieve };

struct SearchAborted {};

struct MemoEntry {
  int value;
  bool exact;
};

struct Undo {
  Color previous_color;
  Color removed;
  Phase previous_phase;
};

// Compact mutable search state with do/undo. In store-then-retrieve mode the
// phase is part of the state.
class Searcher {
 public:
  Searcher(const Instance& instance, bool store_then_retrieve, const SearchLimits& limits,
           const SearchOptions& options)
      : upstream_(instance.upstream),
        lanes_(instance.lanes),
        width_(instance.width),
        str_(store_then_retrieve),
        limits_(limits),
        options_(options) {
    if (str_) options_.dominance_pruning = false;
    load(new_state(instance));
  }

  void load(const ShopState& s) {
    grid_.assign(s.grid().begin(), s.grid().end());
    counts_.resize(static_cast<std::size_t>(lanes_));
    buffered_ = 0;
    for (int i = 0; i < lanes_; ++i) {
      counts_[static_cast<std::size_t>(i)] = s.lane_count(i);
      buffered_ += s.lane_count(i);
    }
    pos_ = s.upstream_pos();
    color_ = s.current_color();
    remaining_.assign(static_cast<std::size_t>(s.num_colors() + 1), 0);
    distinct_ = 0;
    auto add = [&](Color c) {
      if (remaining_[static_cast<std::size_t>(c)]++ == 0) ++distinct_;
    };
    for (Color c : grid_) {
      if (c != kEmpty) add(c);
    }
    for (std::size_t n = pos_; n < upstream_.size(); ++n) add(upstream_[n]);
    if (!str_) {
      phase_ = Phase::Free;
    } else {
      phase_ = (pos_ < upstream_.size() && buffered_ < lanes_ * width_) ? Phase::Store : Phase::Retrieve;
    }
  }

  // Returns the exact cost-to-go when it is below `bound`, otherwise some
  // lower bound that is >= bound.
  int search(int bound) {
    tick();
    if (terminal()) return 0;
    const std::string key = make_key();
    int lb = static_lower_bound();
    if (auto it = memo_.find(key); it != memo_.end()) {
      if (it->second.exact) return it->second.value;
      lb = std::max(lb, it->second.value);
    }
    if (lb >= bound) return lb;

    int best = kInf;
    for (const Action a : ordered_actions()) {
      const int cost = action_cost(a);
      const Undo u = perform(a);
      path_.push_back(a);
      g_ += cost;
      const int v = cost + search(std::min(bound, best) - cost);
      g_ -= cost;
      path_.pop_back();
      revert(a, u);
      best = std::min(best, v);
      if (best <= lb) break;
    }
    const bool exact = best < bound;
    memo_[key] = {best, exact};
    if (memo_.size() > limits_.max_memo_entries) throw SearchAborted{};
    if (exact && track_incumbent_ && g_ + best < incumbent_cost_) record_incumbent(best);
    return best;
  }

  // Plain depth-first branch-and-bound against the incumbent.
  void dfs(int g) {
    tick();
    if (g + static_lower_bound() >= incumbent_cost_) return;
    if (terminal()) {
      incumbent_cost_ = g;
      incumbent_ = path_;
      return;
    }
    for (const Action a : ordered_actions()) {
      const int cost = action_cost(a);
      const Undo u = perform(a);
      path_.push_back(a);
      dfs(g + cost);
      path_.pop_back();
      revert(a, u);
    }
  }

  void set_incumbent(std::vector<Action> actions, int cost) {
    incumbent_ = std::move(actions);
    incumbent_cost_ = cost;
  }
  void track_incumbent(bool on) { track_incumbent_ = on; }
  void start_clock() { clock_ = Stopwatch{}; }

  [[nodiscard]] const std::vector<Action>& incumbent() const { return incumbent_; }
  [[nodiscard]] int incumbent_cost() const { return incumbent_cost_; }
  [[nodiscard]] std::uint64_t nodes() const { return nodes_; }
  [[nodiscard]] std::size_t memo_size() const { return memo_.size(); }

 private:
  [[nodiscard]] bool terminal() const { return pos_ == upstream_.size() && buffered_ == 0; }

  void tick() {
    ++nodes_;
    if (limits_.max_nodes && nodes_ > *limits_.max_nodes) throw SearchAborted{};
    if (limits_.max_seconds && (nodes_ & 1023U) == 0 && clock_.seconds() > *limits_.max_seconds) {
      throw SearchAborted{};
    }
  }

  [[nodiscard]] Color cell(int lane, int slot) const { return grid_[static_cast<std::size_t>(lane * width_ + slot)]; }
  [[nodiscard]] int count(int lane) const { return counts_[static_cast<std::size_t>(lane)]; }
  [[nodiscard]] Color exit_color(int lane) const { return cell(lane, width_ - 1); }
  [[nodiscard]] Color rear_color(int lane) const {
    return count(lane) == 0 ? kEmpty : cell(lane, width_ - count(lane));
  }
  [[nodiscard]] Color incoming() const { return pos_ < upstream_.size() ? upstream_[pos_] : kEmpty; }

  // Every remaining color must be painted at least once; leaving a current
  // color that no longer occurs costs one more change.
  [[nodiscard]] int static_lower_bound() const {
    if (distinct_ == 0) return 0;
    if (color_ != kEmpty && remaining_[static_cast<std::size_t>(color_)] == 0) return distinct_;
    return distinct_ - 1;
  }

  [[nodiscard]] int action_cost(Action a) const {
    if (a.is_store()) return 0;
    const Color c = exit_color(a.lane);
    return (color_ != kEmpty && c != color_) ? 1 : 0;
  }

  std::vector<Action> ordered_actions() const {
    const bool can_store = pos_ < upstream_.size() && phase_ != Phase::Retrieve;
    const bool can_retrieve = phase_ != Phase::Store;
    const Color e = incoming();
    std::vector<Action> ranked[5];
    for (int i = 0; i < lanes_; ++i) {
      if (can_retrieve && count(i) > 0) {
        const bool greedy = color_ != kEmpty && exit_color(i) == color_;
        ranked[greedy ? 0 : 3].push_back(Action::retrieve(i));
      }
      if (can_store && count(i) < width_) {
        int rank = 4;
        if (count(i) == 0 && e == color_) {
          rank = 1;
        } else if (count(i) > 0 && rear_color(i) == e) {
          rank = 2;
        }
        ranked[rank].push_back(Action::store(i));
      }
    }
    if (options_.dominance_pruning) {
      if (!ranked[0].empty()) return {ranked[0].front()};
      if (!ranked[1].empty()) return {ranked[1].front()};
    }
    std::vector<Action> out;
    for (auto& r : ranked) out.insert(out.end(), r.begin(), r.end());
    return out;
  }

  Undo perform(Action a) {
    Undo u{color_, kEmpty, phase_};
    const auto base = static_cast<std::size_t>(a.lane * width_);
    auto& n = counts_[static_cast<std::size_t>(a.lane)];
    if (a.is_store()) {
      grid_[base + static_cast<std::size_t>(width_ - n - 1)] = upstream_[pos_];
      ++pos_;
      ++n;
      ++buffered_;
      if (str_ && (buffered_ == lanes_ * width_ || pos_ == upstream_.size())) phase_ = Phase::Retrieve;
    } else {
      u.removed = grid_[base + static_cast<std::size_t>(width_ - 1)];
      for (int j = width_ - 1; j > width_ - n; --j) {
        grid_[base + static_cast<std::size_t>(j)] = grid_[base + static_cast<std::size_t>(j - 1)];
      }
      grid_[base + static_cast<std::size_t>(width_ - n)] = kEmpty;
      --n;
      --buffered_;
      color_ = u.removed;
      if (--remaining_[static_cast<std::size_t>(u.removed)] == 0) --distinct_;
      if (str_ && buffered_ == 0) phase_ = Phase::Store;
    }
    return u;
  }

  void revert(Action a, const Undo& u) {
    const auto base = static_cast<std::size_t>(a.lane * width_);
    auto& n = counts_[static_cast<std::size_t>(a.lane)];
    if (a.is_store()) {
      --n;
      --buffered_;
      --pos_;
      grid_[base + static_cast<std::size_t>(width_ - n - 1)] = kEmpty;
    } else {
      for (int j = width_ - n - 1; j < width_ - 1; ++j) {
        grid_[base + static_cast<std::size_t>(j)] = grid_[base + static_cast<std::size_t>(j + 1)];
      }
      grid_[base + static_cast<std::size_t>(width_ - 1)] = u.removed;
      ++n;
      ++buffered_;
      if (remaining_[static_cast<std::size_t>(u.removed)]++ == 0) ++distinct_;
    }
    color_ = u.previous_color;
    phase_ = u.previous_phase;
  }

  std::string make_key() const {
    std::string key;
    const auto w = static_cast<std::size_t>(width_);
    key.reserve(grid_.size() + 4);
    if (options_.symmetry_reduction && lanes_ > 1) {
      std::vector<std::string> blocks(static_cast<std::size_t>(lanes_));
      for (int i = 0; i < lanes_; ++i) {
        auto& b = blocks[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < w; ++j) b.push_back(static_cast<char>(grid_[static_cast<std::size_t>(i) * w + j]));
      }
      std::sort(blocks.begin(), blocks.end());
      for (const auto& b : blocks) key += b;
    } else {
      for (Color c : grid_) key.push_back(static_cast<char>(c));
    }
    key.push_back(static_cast<char>(pos_ & 0xFF));
    key.push_back(static_cast<char>((pos_ >> 8) & 0xFF));
    key.push_back(static_cast<char>((pos_ >> 16) & 0xFF));
    key.push_back(static_cast<char>(color_));
    key.push_back(static_cast<char>(phase_));
    return key;
  }

  // Follows exact memo entries from the current node; leaves the state as found.
  std::vector<Action> reconstruct(int value) {
    std::vector<std::pair<Action, Undo>> trail;
    int remaining = value;
    while (!terminal()) {
      bool moved = false;
      for (const Action a : ordered_actions()) {
        const int cost = action_cost(a);
        if (cost > remaining) continue;
        const Undo u = perform(a);
        int child = -1;
        if (terminal()) {
          child = 0;
        } else if (auto it = memo_.find(make_key()); it != memo_.end() && it->second.exact) {
          child = it->second.value;
        }
        if (child >= 0 && cost + child == remaining) {
          trail.emplace_back(a, u);
          remaining -= cost;
          moved = true;
          break;
        }
        revert(a, u);
      }
      if (!moved) throw Error("internal: optimal path reconstruction failed");
    }
    std::vector<Action> actions;
    actions.reserve(trail.size());
    for (const auto& [a, u] : trail) actions.push_back(a);
    for (auto it = trail.rbegin(); it != trail.rend(); ++it) revert(it->first, it->second);
    return actions;
  }

  void record_incumbent(int best) {
    std::vector<Action> full = path_;
    const auto tail = reconstruct(best);
    full.insert(full.end(), tail.begin(), tail.end());
    incumbent_ = std::move(full);
    incumbent_cost_ = g_ + best;
  }

 public:
  std::vector<Action> optimal_actions(int value) { return reconstruct(value); }

 private:
  const std::vector<Color>& upstream_;
  int lanes_;
  int width_;
  bool str_;
  SearchLimits limits_;
  SearchOptions options_;

  std::vector<Color> grid_;
  std::vector<int> counts_;
  int buffered_ = 0;
  std::size_t pos_ = 0;
  Color color_ = kEmpty;
  Phase phase_ = Phase::Free;
  std::vector<int> remaining_;
  int distinct_ = 0;

  std::unordered_map<std::string, MemoEntry> memo_;
  std::vector<Action> path_;
  int g_ = 0;
  bool track_incumbent_ = false;
  std::vector<Action> incumbent_;
  int incumbent_cost_ = kInf;
  std::uint64_t nodes_ = 0;
  Stopwatch clock_;
};

SearchLimits with_size_guard(const Instance& instance, SearchLimits limits) {
  // Unlimited searches are only allowed on instances whose state space is
  // small; everything else gets the five-minute default cutoff.
  if (!limits.max_nodes && !limits.max_seconds && (instance.upstream.size() > 40 || instance.buffer_size() > 9)) {
    limits.max_seconds = 300.0;
  }
  return limits;
}

ExactResult run_search(const Instance& instance, bool store_then_retrieve, const SearchLimits& limits,
                       const SearchOptions& options, const char* producer) {
  instance.validate();
  Stopwatch clock;
  // Greedy is itself a store-then-retrieve policy, so it seeds both variants.
  const Solution seed = greedy_solve(instance);

  Searcher searcher(instance, store_then_retrieve, with_size_guard(instance, limits), options);
  searcher.set_incumbent(seed.actions, seed.color_changes);
  searcher.start_clock();
  ExactResult result;
  try {
    if (options.memoize) {
      searcher.track_incumbent(true);
      const int value = searcher.search(seed.color_changes + 1);
      if (value < seed.color_changes) searcher.set_incumbent(searcher.optimal_actions(value), value);
    } else {
      searcher.dfs(0);
    }
    result.proven_optimal = true;
  } catch (const SearchAborted&) {
    result.proven_optimal = false;
  }
  result.nodes_expanded = searcher.nodes();
  result.solution = make_solution(instance, searcher.incumbent(), producer, clock.seconds());
  return result;
}

}  // namespace

ExactResult solve_exact(const Instance& instance, const SearchLimits& limits, const SearchOptions& options) {
  return run_search(instance, false, limits, options, "exact");
}

ExactResult solve_exact_store_then_retrieve(const Instance& instance, const SearchLimits& limits,
                                            const SearchOptions& options) {
  return run_search(instance, true, limits, options, "exact-str");
}

struct CostToGo::Impl {
  explicit Impl(const Instance& inst) : instance(inst), searcher(instance, false, SearchLimits{}, SearchOptions{}) {}
  Instance instance;
  Searcher searcher;
};

CostToGo::CostToGo(const Instance& instance) : impl_(std::make_unique<Impl>(instance)) {}
CostToGo::~CostToGo() = default;
CostToGo::CostToGo(CostToGo&&) noexcept = default;
CostToGo& CostToGo::operator=(CostToGo&&) noexcept = default;

int CostToGo::optimum(const ShopState& state) {
  impl_->searcher.load(state);
  return impl_->searcher.search(kInf);
}

std::size_t CostToGo::memo_size() const { return impl_->searcher.memo_size(); }

Instance gap_family(int k) {
  if (k < 1) throw Error("gap_family needs k >= 1");
  Instance inst;
  inst.num_colors = 2;
  inst.lanes = 2;
  inst.width = 2;
  for (int r = 0; r < k; ++r) inst.upstream.insert(inst.upstream.end(), {2, 1, 1, 1});
  inst.meta.distribution = "gap-family";
  inst.meta.seed = static_cast<std::uint64_t>(k);
  return inst;
}

}  // namespace paintshop
