#include "posewire/wire.hpp"

#include <bit>
#include <cstring>

namespace posewire::wire {

namespace {

template <typename T>
void put_le(std::uint8_t* out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out[i] = static_cast<std::uint8_t>(value >> (8 * i));
}

template <typename T>
T get_le(const std::uint8_t* in) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(in[i]) << (8 * i);
  return value;
}

void put_f32(std::uint8_t* out, float v) { put_le(out, std::bit_cast<std::uint32_t>(v)); }
float get_f32(const std::uint8_t* in) { return std::bit_cast<float>(get_le<std::uint32_t>(in)); }

}  // namespace

FrameBytes encode_frame(const PoseFrame& frame) {
  FrameBytes out{};
  std::memcpy(out.data(), kMagic, 4);
  out[4] = kVersion;
  put_le(&out[5], frame.seq);
  put_le(&out[9], frame.timestamp_us);
  out[17] = static_cast<std::uint8_t>(kJointCount);
  std::uint8_t* rec = &out[18];
  for (const JointSample& j : frame.joints) {
    put_f32(rec, j.position.x);
    put_f32(rec + 4, j.position.y);
    put_f32(rec + 8, j.position.z);
    put_f32(rec + 12, j.confidence);
    rec += kJointRecordSize;
  }
  return out;
}

PoseFrame decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameSize) {
    throw WireError(WireError::Kind::kShortRead,
                    "short read: " + std::to_string(bytes.size()) + " of " + std::to_string(kFrameSize) + " bytes");
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw WireError(WireError::Kind::kBadMagic, "bad frame magic");
  if (bytes[4] != kVersion) {
    throw WireError(WireError::Kind::kBadVersion, "unsupported wire version " + std::to_string(bytes[4]));
  }
  if (bytes[17] != kJointCount) {
    throw WireError(WireError::Kind::kBadJointCount, "unexpected joint count " + std::to_string(bytes[17]));
  }
  PoseFrame frame;
  frame.seq = get_le<std::uint32_t>(&bytes[5]);
  frame.timestamp_us = get_le<std::uint64_t>(&bytes[9]);
  const std::uint8_t* rec = &bytes[18];
  for (JointSample& j : frame.joints) {
    j.position = {get_f32(rec), get_f32(rec + 4), get_f32(rec + 8)};
    j.confidence = get_f32(rec + 12);
    rec += kJointRecordSize;
  }
  return frame;
}

}  // namespace posewire::wire
