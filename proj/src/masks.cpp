#include "paintshop/masks.hpp"

#include <algorithm>

namespace paintshop {

ActionMask::ActionMask(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) bits_.push_back(b != 0 ? 1 : 0);
}

std::size_t ActionMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string ActionMask::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

namespace {

std::size_t width_of(const ShopState& s) { return static_cast<std::size_t>(2 * s.lanes()); }
std::size_t store_index(const ShopState& s, int lane) { return static_cast<std::size_t>(s.lanes() + lane); }

}  // namespace

ActionMask mask_invalid(const ShopState& s) {
  ActionMask m = ActionMask::none(width_of(s));
  const bool upstream_left = s.upstream_remaining() > 0;
  for (int i = 0; i < s.lanes(); ++i) {
    m.set(static_cast<std::size_t>(i), !s.lane_empty(i));
    m.set(store_index(s, i), upstream_left && !s.lane_full(i));
  }
  return m;
}

ActionMask mask_greedy_retrieval(const ShopState& s) {
  ActionMask m = ActionMask::none(width_of(s));
  const Color p = s.current_color();
  bool found = false;
  if (p != kEmpty) {
    for (int i = 0; i < s.lanes(); ++i) {
      if (s.exit_color(i) == p) {
        m.set(static_cast<std::size_t>(i), true);
        found = true;
      }
    }
  }
  return found ? m : ActionMask::all(width_of(s));
}

ActionMask mask_fast_track(const ShopState& s) {
  ActionMask m = ActionMask::none(width_of(s));
  const Color e = s.incoming();
  bool found = false;
  if (e != kEmpty && e == s.current_color()) {
    for (int i = 0; i < s.lanes(); ++i) {
      if (s.lane_empty(i)) {
        m.set(store_index(s, i), true);
        found = true;
      }
    }
  }
  return found ? m : ActionMask::all(width_of(s));
}

ActionMask mask_greedy_storage(const ShopState& s) {
  ActionMask m = ActionMask::none(width_of(s));
  const Color e = s.incoming();
  bool found = false;
  if (e != kEmpty) {
    for (int i = 0; i < s.lanes(); ++i) {
      // exists j >= 2 (1-based) with B[i][j] == e and B[i][j-1] empty
      if (!s.lane_empty(i) && !s.lane_full(i) && s.rear_color(i) == e) {
        m.set(store_index(s, i), true);
        found = true;
      }
    }
  }
  return found ? m : ActionMask::all(width_of(s));
}

ActionMask combine_and(const ActionMask& m1, const ActionMask& m2) {
  if (m1.size() != m2.size()) throw Error("mask size mismatch");
  ActionMask out = ActionMask::none(m1.size());
  for (std::size_t i = 0; i < m1.size(); ++i) out.set(i, m1[i] && m2[i]);
  return out;
}

ActionMask combine_priority(const ActionMask& m1, const ActionMask& m2) {
  if (m1.size() != m2.size()) throw Error("mask size mismatch");
  return m1.forbids_any() ? m1 : m2;
}

MaskVariant parse_mask_variant(std::string_view name) {
  if (name == "all") return MaskVariant::All;
  if (name == "inv-gr-ft") return MaskVariant::InvGrFt;
  if (name == "inv-gr") return MaskVariant::InvGr;
  if (name == "inv") return MaskVariant::Inv;
  if (name == "none") return MaskVariant::None;
  throw Error("unknown mask variant '" + std::string(name) + "'");
}

std::string_view to_string(MaskVariant v) {
  switch (v) {
    case MaskVariant::All: return "all";
    case MaskVariant::InvGrFt: return "inv-gr-ft";
    case MaskVariant::InvGr: return "inv-gr";
    case MaskVariant::Inv: return "inv";
    case MaskVariant::None: return "none";
  }
  return "?";
}

ActionMask full_mask(const ShopState& s, MaskVariant variant) {
  switch (variant) {
    case MaskVariant::None: return ActionMask::all(width_of(s));
    case MaskVariant::Inv: return mask_invalid(s);
    case MaskVariant::InvGr: return combine_and(mask_invalid(s), mask_greedy_retrieval(s));
    case MaskVariant::InvGrFt:
      return combine_and(mask_invalid(s), combine_priority(mask_greedy_retrieval(s), mask_fast_track(s)));
    case MaskVariant::All:
      return combine_and(mask_invalid(s),
                         combine_priority(combine_priority(mask_greedy_retrieval(s), mask_fast_track(s)),
                                          mask_greedy_storage(s)));
  }
  throw Error("unhandled mask variant");
}

}  // namespace paintshop
