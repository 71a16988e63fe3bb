#include "farp/action.hpp"

namespace farp {

std::optional<Action> action_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kActionCount; ++i) {
    if (kActionNames[i] == name) return static_cast<Action>(i);
  }
  return std::nullopt;
}

}  // namespace farp
