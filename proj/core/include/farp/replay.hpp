#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "farp/action.hpp"

namespace farp {

inline constexpr std::uint16_t kDefaultTickRate = 35;

// Per-tick action, pose, and cumulative stats for one player viewpoint.
// kills/deaths/damage count from the start of the replay and never decrease.
struct FrameRecord {
  std::uint32_t tick = 0;
  ActionVector action;
  float pos_x = 0.0f;  // map units
  float pos_y = 0.0f;
  float yaw = 0.0f;  // degrees
  std::uint16_t kills = 0;
  std::uint16_t deaths = 0;
  std::uint32_t damage = 0;

  bool operator==(const FrameRecord&) const = default;
};

struct Replay {
  std::string player_id;
  std::string match_id;
  std::uint16_t tick_rate = kDefaultTickRate;  // ticks per second
  std::vector<FrameRecord> frames;

  bool operator==(const Replay&) const = default;

  double duration_seconds() const;
};

// One invariant failure, located by frame index and field name.
// frame_index is npos-like (size of frames) for replay-level findings.
struct Violation {
  std::size_t frame_index = 0;
  std::string field;
  std::string message;
};

// Checks every type invariant: non-empty frames, strictly increasing ticks,
// monotone non-decreasing kills/deaths/damage, finite mouse/pose values.
// Returns an empty list iff the replay is valid.
std::vector<Violation> validate_replay(const Replay& replay);

}  // namespace farp
