#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "farp/replay.hpp"

namespace farp {

// .farp binary layout (little-endian):
//   magic "FARP", version u16,
//   player_id (u16 length + UTF-8 bytes), match_id (u16 length + bytes),
//   tick_rate u16, frame count u32,
//   then fixed 33-byte records:
//     tick u32, mouse_x f32, mouse_y f32,
//     buttons u8 (LSB-first: attack, forward, backward, left, right),
//     pos_x f32, pos_y f32, yaw f32, kills u16, deaths u16, damage u32.
inline constexpr std::uint8_t kMagic[4] = {'F', 'A', 'R', 'P'};
inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::size_t kFrameRecordSize = 33;
inline constexpr const char* kReplayExtension = ".farp";

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset);

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Deterministic encoding of a valid replay. Invariant violations (empty
// frames, non-monotone ticks, non-finite floats, out-of-range counters)
// are rejected with the offending frame and field named.
std::vector<std::uint8_t> encode_replay(const Replay& replay);

// Inverse of encode_replay. Rejects bad magic, version mismatches,
// truncated or trailing bytes, and payloads that violate replay
// invariants; errors carry the byte offset of the problem.
Replay decode_replay(std::span<const std::uint8_t> bytes);

Replay read_replay_file(const std::filesystem::path& path);
void write_replay_file(const std::filesystem::path& path, const Replay& replay);

}  // namespace farp
