#include "posewire/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace posewire::synth {

namespace {

constexpr float kGridLimit = 28.0f;

// Cell holding a coordinate: the nearest integer, capped at the last cell.
int cell_of(float coord) { return std::min(static_cast<int>(std::lround(coord)), 27); }

}  // namespace

void validate(const GroundTruthPose& truth) {
  if (!(truth.peak_value > 0.0f) || !std::isfinite(truth.peak_value)) {
    throw std::invalid_argument("peak value must be positive and finite");
  }
  for (std::size_t j = 0; j < kJointCount; ++j) {
    const Vec3& p = truth.positions[j];
    for (const float c : {p.x, p.y, p.z}) {
      if (!(c >= 0.0f && c < kGridLimit)) {
        throw std::invalid_argument("joint " + std::string(kJointNames[j]) + " lies outside the grid");
      }
    }
  }
}

GroundTruthPose random_truth(Rng& rng, float quantum) {
  GroundTruthPose truth;
  std::uniform_real_distribution<float> coord(0.0f, kGridLimit);
  const auto steps = quantum > 0.0f ? static_cast<int>(kGridLimit / quantum) : 0;
  std::uniform_int_distribution<int> step(0, std::max(steps - 1, 0));
  auto draw = [&]() -> float {
    if (quantum > 0.0f) return static_cast<float>(step(rng)) * quantum;
    // uniform_real_distribution<float> may round up to its upper bound.
    float c = coord(rng);
    while (c >= kGridLimit) c = coord(rng);
    return c;
  };
  for (Vec3& p : truth.positions) {
    p.x = draw();
    p.y = draw();
    p.z = draw();
  }
  return truth;
}

TensorFrame render_frame(const GroundTruthPose& truth, Rng& rng, std::uint32_t frame_index) {
  validate(truth);
  TensorFrame frame;
  frame.frame_index = frame_index;

  std::uniform_real_distribution<float> background(0.0f, truth.peak_value / 2.0f);
  std::uniform_real_distribution<float> noise(-1.0f, 1.0f);
  for (float& h : frame.heatmap) h = background(rng);
  for (float& o : frame.offsets) o = noise(rng);

  for (std::size_t j = 0; j < kJointCount; ++j) {
    const Vec3& p = truth.positions[j];
    const int u = cell_of(p.x);
    const int v = cell_of(p.y);
    const int k = cell_of(p.z);
    const std::size_t channel = j * kDepthBins + static_cast<std::size_t>(k);
    frame.heatmap[volume_index(channel, v, u)] = truth.peak_value;
    // Exact: the residual of a float and a nearby small integer is representable.
    frame.offsets[volume_index(channel, v, u)] = p.x - static_cast<float>(u);
    frame.offsets[volume_index(kHeatmapChannels + channel, v, u)] = p.y - static_cast<float>(v);
    frame.offsets[volume_index(2 * kHeatmapChannels + channel, v, u)] = p.z - static_cast<float>(k);
  }
  return frame;
}

TensorFrame random_frame(Rng& rng, FrameFlavor flavor, std::uint32_t frame_index) {
  TensorFrame frame;
  frame.frame_index = frame_index;
  switch (flavor) {
    case FrameFlavor::kContinuous: {
      std::uniform_real_distribution<float> d(-1.0f, 1.0f);
      for (float& h : frame.heatmap) h = d(rng);
      break;
    }
    case FrameFlavor::kQuantized: {
      std::uniform_int_distribution<int> d(0, 3);
      for (float& h : frame.heatmap) h = static_cast<float>(d(rng));
      break;
    }
    case FrameFlavor::kConstant: {
      const float c = std::uniform_real_distribution<float>(-1.0f, 1.0f)(rng);
      std::fill(frame.heatmap.begin(), frame.heatmap.end(), c);
      break;
    }
  }
  std::uniform_real_distribution<float> noise(-1.0f, 1.0f);
  for (float& o : frame.offsets) o = noise(rng);
  return frame;
}

RawPose oracle_decode(const TensorFrame& frame) {
  const int side = 28;
  const int bins = 28;
  const int joints = 24;
  RawPose pose;
  pose.frame_index = frame.frame_index;
  for (int j = 0; j < joints; ++j) {
    int best_k = 0, best_v = 0, best_u = 0;
    float best = frame.heatmap[(j * bins) * side * side];
    for (int k = 0; k < bins; ++k) {
      for (int v = 0; v < side; ++v) {
        for (int u = 0; u < side; ++u) {
          const float h = frame.heatmap[((j * bins + k) * side + v) * side + u];
          const bool earlier = k < best_k || (k == best_k && (v < best_v || (v == best_v && u < best_u)));
          if (h > best || (h == best && earlier)) {
            best = h;
            best_k = k;
            best_v = v;
            best_u = u;
          }
        }
      }
    }
    const int x_channel = j * bins + best_k;
    const int y_channel = joints * bins + x_channel;
    const int z_channel = 2 * joints * bins + x_channel;
    const int cell = best_v * side + best_u;
    const float dx = frame.offsets[x_channel * side * side + cell];
    const float dy = frame.offsets[y_channel * side * side + cell];
    const float dz = frame.offsets[z_channel * side * side + cell];

    RawJoint& out = pose.joints[j];
    out.joint = JointId(static_cast<std::size_t>(j));
    out.peak_cell = {static_cast<std::uint8_t>(best_k), static_cast<std::uint8_t>(best_v),
                     static_cast<std::uint8_t>(best_u)};
    out.grid_pos = {static_cast<float>(best_u) + dx, static_cast<float>(best_v) + dy,
                    static_cast<float>(best_k) + dz};
    out.confidence = best;
  }
  return pose;
}

}  // namespace posewire::synth
