#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "paintshop/core.hpp"

namespace paintshop {

// 0/1 filter over the flat action space (retrieve 0..L-1, store L..2L-1).
class ActionMask {
 public:
  ActionMask() = default;
  ActionMask(std::size_t size, bool value) : bits_(size, value ? 1 : 0) {}
  ActionMask(std::initializer_list<int> bits);

  static ActionMask all(std::size_t size) { return ActionMask(size, true); }
  static ActionMask none(std::size_t size) { return ActionMask(size, false); }

  [[nodiscard]] std::size_t size() const { return bits_.size(); }
  [[nodiscard]] bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }

  [[nodiscard]] bool admits(Action a, int lanes) const { return (*this)[static_cast<std::size_t>(a.flat(lanes))]; }
  [[nodiscard]] std::size_t count() const;
  [[nodiscard]] bool any() const { return count() > 0; }
  [[nodiscard]] bool all_set() const { return count() == size(); }
  // A mask is applicable when it forbids at least one action.
  [[nodiscard]] bool forbids_any() const { return !all_set(); }

  [[nodiscard]] std::string to_string() const;
  bool operator==(const ActionMask&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

ActionMask mask_invalid(const ShopState& state);
ActionMask mask_greedy_retrieval(const ShopState& state);
ActionMask mask_fast_track(const ShopState& state);
ActionMask mask_greedy_storage(const ShopState& state);

// Pointwise conjunction.
ActionMask combine_and(const ActionMask& m1, const ActionMask& m2);
// m1 if it forbids at least one action, otherwise m2.
ActionMask combine_priority(const ActionMask& m1, const ActionMask& m2);

enum class MaskVariant : std::uint8_t {
  All,       // INV and ((GR >> FT) >> GS)
  InvGrFt,   // INV and (GR >> FT)
  InvGr,     // INV and GR
  Inv,       // INV
  None,      // no masking, invalid actions are possible
};

MaskVariant parse_mask_variant(std::string_view name);
std::string_view to_string(MaskVariant v);

ActionMask full_mask(const ShopState& state, MaskVariant variant = MaskVariant::All);

}  // namespace paintshop
