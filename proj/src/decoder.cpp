#include "posewire/decoder.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>
#include <vector>

namespace posewire {

SlabPeak argmax_slab(std::span<const float> heatmap, JointId joint) {
  if (heatmap.size() != kHeatmapSize) throw std::invalid_argument("heatmap has non-canonical size");

  // The slab is contiguous, so flat order is exactly (k, v, u) lexicographic
  // order and a strict '>' keeps the first of equal maxima.
  constexpr std::size_t kSlabSize = kDepthBins * kCellsPerChannel;
  const float* slab = heatmap.data() + joint.index() * kSlabSize;
  std::size_t best = 0;
  float best_score = slab[0];
  for (std::size_t i = 1; i < kSlabSize; ++i) {
    if (slab[i] > best_score) {
      best_score = slab[i];
      best = i;
    }
  }
  const Cell cell{static_cast<std::uint8_t>(best / kCellsPerChannel),
                  static_cast<std::uint8_t>((best % kCellsPerChannel) / kGridSide),
                  static_cast<std::uint8_t>(best % kGridSide)};
  return {cell, best_score};
}

Vec3 read_offsets(std::span<const float> offsets, JointId joint, Cell cell) {
  if (offsets.size() != kOffsetSize) throw std::invalid_argument("offsets have non-canonical size");
  const std::size_t channel = joint.index() * kDepthBins + cell.k;
  return {offsets[volume_index(channel, cell.v, cell.u)],
          offsets[volume_index(kHeatmapChannels + channel, cell.v, cell.u)],
          offsets[volume_index(2 * kHeatmapChannels + channel, cell.v, cell.u)]};
}

RawJoint decode_joint(const TensorFrame& frame, JointId joint) {
  const SlabPeak peak = argmax_slab(frame.heatmap, joint);
  const Vec3 d = read_offsets(frame.offsets, joint, peak.cell);
  RawJoint out;
  out.joint = joint;
  out.peak_cell = peak.cell;
  out.grid_pos = {static_cast<float>(peak.cell.u) + d.x, static_cast<float>(peak.cell.v) + d.y,
                  static_cast<float>(peak.cell.k) + d.z};
  out.confidence = peak.score;
  return out;
}

RawPose decode_pose(const TensorFrame& frame) {
  RawPose pose;
  pose.frame_index = frame.frame_index;
  for (const JointId j : all_joints()) pose.joints[j.index()] = decode_joint(frame, j);
  return pose;
}

RawPose decode_pose_parallel(const TensorFrame& frame, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, kJointCount);
  if (threads == 1) return decode_pose(frame);

  RawPose pose;
  pose.frame_index = frame.frame_index;
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&pose, &frame, t, threads] {
      for (std::size_t j = t; j < kJointCount; j += threads) {
        pose.joints[j] = decode_joint(frame, JointId(j));
      }
    });
  }
  workers.clear();
  return pose;
}

PoseFrame to_pose_frame(const RawPose& raw) {
  PoseFrame out;
  out.seq = raw.frame_index;
  for (std::size_t j = 0; j < kJointCount; ++j) {
    out.joints[j] = {raw.joints[j].grid_pos, raw.joints[j].confidence};
  }
  return out;
}

}  // namespace posewire
