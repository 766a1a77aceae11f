#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "paintshop/core.hpp"

namespace paintshop {

struct SearchLimits {
  std::optional<std::uint64_t> max_nodes;
  std::optional<double> max_seconds;
  std::size_t max_memo_entries = 20'000'000;
};

struct SearchOptions {
  // Memoize cost-to-go on canonical states. Off: plain depth-first
  // branch-and-bound, exponential, for cross-checking on tiny instances.
  bool memoize = true;
  // Memo key sorts lane contents; lanes are interchangeable in cost.
  bool symmetry_reduction = true;
  // Expand only a greedy retrieve (else only a fast-track store) when one
  // exists. Flexible search only.
  bool dominance_pruning = false;
};

struct ExactResult {
  Solution solution;
  bool proven_optimal = false;  // false: a limit was hit, `solution` is the incumbent
  std::uint64_t nodes_expanded = 0;
};

// Minimum color changes over all valid store/retrieve interleavings.
ExactResult solve_exact(const Instance& instance, const SearchLimits& limits = {}, const SearchOptions& options = {});

// Same search restricted to alternating full-fill / full-empty phases.
ExactResult solve_exact_store_then_retrieve(const Instance& instance, const SearchLimits& limits = {},
                                            const SearchOptions& options = {});

// Optimal remaining color changes from arbitrary reachable states of one
// instance (flexible variant). The memo persists across queries.
class CostToGo {
 public:
  explicit CostToGo(const Instance& instance);
  ~CostToGo();
  CostToGo(CostToGo&&) noexcept;
  CostToGo& operator=(CostToGo&&) noexcept;

  int optimum(const ShopState& state);
  [[nodiscard]] std::size_t memo_size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// k copies of [2, 1, 1, 1] on a 2x2 buffer with two colors.
Instance gap_family(int k);

}  // namespace paintshop
