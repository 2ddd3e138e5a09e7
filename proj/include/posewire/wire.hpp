#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "posewire/skeleton.hpp"

namespace posewire::wire {

// Frame layout, little-endian throughout:
//   0  "POSE"             4  version u8 (1)    5  seq u32
//   9  timestamp_us u64   17 joint_count u8 (24)
//   18 24 x (x, y, z, confidence) f32
inline constexpr char kMagic[4] = {'P', 'O', 'S', 'E'};
inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kJointRecordSize = 16;
inline constexpr std::size_t kFrameSize = 4 + 1 + 4 + 8 + 1 + kJointCount * kJointRecordSize;
static_assert(kFrameSize == 402);

using FrameBytes = std::array<std::uint8_t, kFrameSize>;

class WireError : public std::runtime_error {
 public:
  enum class Kind { kBadMagic, kBadVersion, kBadJointCount, kShortRead };
  WireError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

FrameBytes encode_frame(const PoseFrame& frame);
/// Decodes the first 402 bytes of `bytes`.
PoseFrame decode_frame(std::span<const std::uint8_t> bytes);

}  // namespace posewire::wire
