#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "posewire/skeleton.hpp"
#include "posewire/tensorio.hpp"

namespace posewire {

/// Heatmap cell as (depth, row, column).
struct Cell {
  std::uint8_t k = 0;
  std::uint8_t v = 0;
  std::uint8_t u = 0;
  friend constexpr bool operator==(const Cell&, const Cell&) = default;
};

struct SlabPeak {
  Cell cell;
  float score = 0.0f;
  friend constexpr bool operator==(const SlabPeak&, const SlabPeak&) = default;
};

struct RawJoint {
  JointId joint;
  Vec3 grid_pos;  // peak cell (u, v, k) plus the offsets read at that cell
  Cell peak_cell;
  float confidence = 0.0f;
  friend constexpr bool operator==(const RawJoint&, const RawJoint&) = default;
};

struct RawPose {
  std::array<RawJoint, kJointCount> joints{};
  std::uint32_t frame_index = 0;
  friend constexpr bool operator==(const RawPose&, const RawPose&) = default;
};

/// Maximum of the 28-channel slab owned by `joint`. Equal maxima resolve to
/// the lexicographically smallest (k, v, u).
SlabPeak argmax_slab(std::span<const float> heatmap, JointId joint);

/// (dx, dy, dz) stored at `cell`. The X, Y and Z offsets live in three
/// consecutive 672-channel blocks, each indexed by joint*28 + k.
Vec3 read_offsets(std::span<const float> offsets, JointId joint, Cell cell);

RawJoint decode_joint(const TensorFrame& frame, JointId joint);

/// Decodes all 24 joints in canonical order.
RawPose decode_pose(const TensorFrame& frame);

/// Same result as decode_pose, with joints split across `threads` workers.
RawPose decode_pose_parallel(const TensorFrame& frame, unsigned threads = 0);

/// Grid-space pose with seq = frame_index and no timestamp.
PoseFrame to_pose_frame(const RawPose& raw);

}  // namespace posewire
