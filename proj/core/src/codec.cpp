#include "farp/codec.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace farp {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " at offset " + std::to_string(offset)),
      offset_(offset) {}

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  put_u32(out, bits);
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void require(std::size_t n, const char* what) const {
    if (remaining() < n) throw ParseError(std::string("truncated ") + what, pos_);
  }

  std::uint8_t u8(const char* what) {
    require(1, what);
    return bytes_[pos_++];
  }

  std::uint16_t u16(const char* what) {
    require(2, what);
    std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_]) |
                      static_cast<std::uint16_t>(bytes_[pos_ + 1]) << 8;
    pos_ += 2;
    return v;
  }

  std::uint32_t u32(const char* what) {
    require(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  float f32(const char* what) {
    std::uint32_t bits = u32(what);
    float v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }

  std::string str(const char* what) {
    const std::uint16_t len = u16(what);
    require(len, what);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), len);
    pos_ += len;
    return s;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void reject(const std::string& where, const std::string& why) {
  throw std::invalid_argument("cannot encode replay: " + where + ": " + why);
}

float checked_f32(float v, std::size_t frame, const char* field) {
  if (!std::isfinite(v)) {
    reject("frame " + std::to_string(frame), std::string(field) + " is not finite");
  }
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_replay(const Replay& replay) {
  if (replay.frames.empty()) reject("frames", "empty replay");
  if (replay.tick_rate == 0) reject("tick_rate", "must be positive");
  if (replay.player_id.size() > std::numeric_limits<std::uint16_t>::max())
    reject("player_id", "longer than 65535 bytes");
  if (replay.match_id.size() > std::numeric_limits<std::uint16_t>::max())
    reject("match_id", "longer than 65535 bytes");
  if (replay.frames.size() > std::numeric_limits<std::uint32_t>::max())
    reject("frames", "more than 2^32-1 records");

  std::vector<std::uint8_t> out;
  out.reserve(18 + replay.player_id.size() + replay.match_id.size() +
              replay.frames.size() * kFrameRecordSize);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u16(out, kFormatVersion);
  put_u16(out, static_cast<std::uint16_t>(replay.player_id.size()));
  out.insert(out.end(), replay.player_id.begin(), replay.player_id.end());
  put_u16(out, static_cast<std::uint16_t>(replay.match_id.size()));
  out.insert(out.end(), replay.match_id.begin(), replay.match_id.end());
  put_u16(out, replay.tick_rate);
  put_u32(out, static_cast<std::uint32_t>(replay.frames.size()));

  const FrameRecord* prev = nullptr;
  for (std::size_t i = 0; i < replay.frames.size(); ++i) {
    const FrameRecord& f = replay.frames[i];
    const std::string where = "frame " + std::to_string(i);
    if (prev) {
      if (f.tick <= prev->tick) reject(where, "tick not strictly increasing");
      if (f.kills < prev->kills) reject(where, "kills decrease");
      if (f.deaths < prev->deaths) reject(where, "deaths decrease");
      if (f.damage < prev->damage) reject(where, "damage decreases");
    }
    put_u32(out, f.tick);
    put_f32(out, checked_f32(f.action.mouse_x, i, "mouse_x"));
    put_f32(out, checked_f32(f.action.mouse_y, i, "mouse_y"));
    std::uint8_t buttons = 0;
    buttons |= f.action.attack ? 0x01 : 0;
    buttons |= f.action.move_forward ? 0x02 : 0;
    buttons |= f.action.move_backward ? 0x04 : 0;
    buttons |= f.action.move_left ? 0x08 : 0;
    buttons |= f.action.move_right ? 0x10 : 0;
    out.push_back(buttons);
    put_f32(out, checked_f32(f.pos_x, i, "pos_x"));
    put_f32(out, checked_f32(f.pos_y, i, "pos_y"));
    put_f32(out, checked_f32(f.yaw, i, "yaw"));
    put_u16(out, f.kills);
    put_u16(out, f.deaths);
    put_u32(out, f.damage);
    prev = &f;
  }
  return out;
}

Replay decode_replay(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);

  in.require(4, "magic");
  for (std::size_t i = 0; i < 4; ++i) {
    if (bytes[i] != kMagic[i]) throw ParseError("bad magic", 0);
  }
  in.u32("magic");

  const std::size_t version_at = in.pos();
  const std::uint16_t version = in.u16("version");
  if (version != kFormatVersion) {
    throw ParseError("unsupported version " + std::to_string(version), version_at);
  }

  Replay replay;
  replay.player_id = in.str("player_id");
  replay.match_id = in.str("match_id");

  const std::size_t tick_rate_at = in.pos();
  replay.tick_rate = in.u16("tick_rate");
  if (replay.tick_rate == 0) throw ParseError("zero tick_rate", tick_rate_at);

  const std::size_t count_at = in.pos();
  const std::uint32_t count = in.u32("frame count");
  if (count == 0) throw ParseError("empty replay", count_at);
  if (in.remaining() != static_cast<std::size_t>(count) * kFrameRecordSize) {
    throw ParseError(in.remaining() < static_cast<std::size_t>(count) * kFrameRecordSize
                         ? "truncated record"
                         : "trailing bytes after last record",
                     in.pos());
  }

  replay.frames.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::size_t record_at = in.pos();
    FrameRecord f;
    f.tick = in.u32("record");
    f.action.mouse_x = in.f32("record");
    f.action.mouse_y = in.f32("record");
    const std::uint8_t buttons = in.u8("record");
    if (buttons & ~0x1f) throw ParseError("reserved button bits set", record_at + 12);
    f.action.attack = buttons & 0x01;
    f.action.move_forward = buttons & 0x02;
    f.action.move_backward = buttons & 0x04;
    f.action.move_left = buttons & 0x08;
    f.action.move_right = buttons & 0x10;
    f.pos_x = in.f32("record");
    f.pos_y = in.f32("record");
    f.yaw = in.f32("record");
    f.kills = in.u16("record");
    f.deaths = in.u16("record");
    f.damage = in.u32("record");

    const std::pair<float, const char*> floats[] = {
        {f.action.mouse_x, "mouse_x"}, {f.action.mouse_y, "mouse_y"},
        {f.pos_x, "pos_x"},            {f.pos_y, "pos_y"},
        {f.yaw, "yaw"},
    };
    for (const auto& [value, name] : floats) {
      if (!std::isfinite(value)) {
        throw ParseError(std::string("non-finite ") + name + " in record " +
                             std::to_string(i),
                         record_at);
      }
    }
    if (!replay.frames.empty()) {
      const FrameRecord& prev = replay.frames.back();
      if (f.tick <= prev.tick)
        throw ParseError("non-increasing tick in record " + std::to_string(i), record_at);
      if (f.kills < prev.kills || f.deaths < prev.deaths || f.damage < prev.damage)
        throw ParseError("non-monotone stats in record " + std::to_string(i), record_at);
    }
    replay.frames.push_back(f);
  }
  return replay;
}

Replay read_replay_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_replay(bytes);
}

void write_replay_file(const std::filesystem::path& path, const Replay& replay) {
  const std::vector<std::uint8_t> bytes = encode_replay(replay);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

}  // namespace farp
