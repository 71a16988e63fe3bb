#include "farp/replay.hpp"

#include <cmath>

namespace farp {

double Replay::duration_seconds() const {
  if (frames.empty() || tick_rate == 0) return 0.0;
  const std::uint64_t span = frames.back().tick - frames.front().tick + 1;
  return static_cast<double>(span) / static_cast<double>(tick_rate);
}

namespace {

void check_finite(std::vector<Violation>& out, std::size_t index, float value,
                  const char* field) {
  if (!std::isfinite(value)) {
    out.push_back({index, field, std::string(field) + " is not finite"});
  }
}

}  // namespace

std::vector<Violation> validate_replay(const Replay& replay) {
  std::vector<Violation> out;
  if (replay.tick_rate == 0) {
    out.push_back({0, "tick_rate", "tick_rate must be positive"});
  }
  if (replay.frames.empty()) {
    out.push_back({0, "frames", "empty replay"});
    return out;
  }
  for (std::size_t i = 0; i < replay.frames.size(); ++i) {
    const FrameRecord& f = replay.frames[i];
    check_finite(out, i, f.action.mouse_x, "mouse_x");
    check_finite(out, i, f.action.mouse_y, "mouse_y");
    check_finite(out, i, f.pos_x, "pos_x");
    check_finite(out, i, f.pos_y, "pos_y");
    check_finite(out, i, f.yaw, "yaw");
    if (i == 0) continue;
    const FrameRecord& prev = replay.frames[i - 1];
    if (f.tick <= prev.tick) {
      out.push_back({i, "tick", "non-increasing tick at index " + std::to_string(i)});
    }
    if (f.kills < prev.kills) {
      out.push_back({i, "kills", "kills decrease at index " + std::to_string(i)});
    }
    if (f.deaths < prev.deaths) {
      out.push_back({i, "deaths", "deaths decrease at index " + std::to_string(i)});
    }
    if (f.damage < prev.damage) {
      out.push_back({i, "damage", "damage decreases at index " + std::to_string(i)});
    }
  }
  return out;
}

}  // namespace farp
