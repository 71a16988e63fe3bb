#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace farp {

// The seven per-tick controls: two continuous mouse deltas (degrees/tick,
// unbounded, never normalised) and five binary buttons.
enum class Action : std::size_t {
  mouse_x = 0,
  mouse_y,
  attack,
  move_forward,
  move_backward,
  move_left,
  move_right,
};

inline constexpr std::size_t kActionCount = 7;

inline constexpr std::array<std::string_view, kActionCount> kActionNames = {
    "mouse_x",       "mouse_y",   "attack",     "move_forward",
    "move_backward", "move_left", "move_right",
};

constexpr std::string_view action_name(Action a) {
  return kActionNames[static_cast<std::size_t>(a)];
}

constexpr bool is_mouse_action(Action a) {
  return a == Action::mouse_x || a == Action::mouse_y;
}

std::optional<Action> action_from_name(std::string_view name);

// One scalar per action. Used for averaged targets (binary entries may be
// fractional), predictions, per-action losses, and penalizing weights.
using ActionValues = std::array<double, kActionCount>;

constexpr double& value_of(ActionValues& v, Action a) {
  return v[static_cast<std::size_t>(a)];
}
constexpr double value_of(const ActionValues& v, Action a) {
  return v[static_cast<std::size_t>(a)];
}

// One tick's stored controls. Binary fields are exactly 0 or 1 here;
// fractional (averaged) values live in ActionValues.
struct ActionVector {
  float mouse_x = 0.0f;
  float mouse_y = 0.0f;
  bool attack = false;
  bool move_forward = false;
  bool move_backward = false;
  bool move_left = false;
  bool move_right = false;

  bool operator==(const ActionVector&) const = default;

  ActionValues as_values() const {
    return {static_cast<double>(mouse_x),
            static_cast<double>(mouse_y),
            attack ? 1.0 : 0.0,
            move_forward ? 1.0 : 0.0,
            move_backward ? 1.0 : 0.0,
            move_left ? 1.0 : 0.0,
            move_right ? 1.0 : 0.0};
  }
};

}  // namespace farp
