#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "posewire/decoder.hpp"
#include "posewire/skeleton.hpp"
#include "posewire/tensorio.hpp"

namespace posewire::synth {

using Rng = std::mt19937_64;

/// Known pose used to render tensors. Components must lie in [0, 28).
struct GroundTruthPose {
  std::array<Vec3, kJointCount> positions{};
  float peak_value = 1.0f;
};

/// Throws std::invalid_argument if any component is outside [0, 28) or the
/// peak is not positive and finite.
void validate(const GroundTruthPose& truth);

/// Uniform positions in [0, 28). With `quantum` > 0 every component is a
/// multiple of it (use a power of two to keep values exact in text).
GroundTruthPose random_truth(Rng& rng, float quantum = 0.0f);

/// Plants one peak per joint at the rounded cell of its position, with
/// background drawn from [0, peak/2) and the exact residual in the offset
/// channels of that cell. All other offsets are noise in [-1, 1).
TensorFrame render_frame(const GroundTruthPose& truth, Rng& rng, std::uint32_t frame_index = 0);

enum class FrameFlavor {
  kContinuous,  // uniform heatmap values, ties practically absent
  kQuantized,   // heatmap values from {0, 1, 2, 3}, many ties
  kConstant,    // every heatmap value equal
};

/// Arbitrary finite tensors for oracle comparisons.
TensorFrame random_frame(Rng& rng, FrameFlavor flavor, std::uint32_t frame_index = 0);

/// Exhaustive reference decoder. Shares no code with the production path.
RawPose oracle_decode(const TensorFrame& frame);

}  // namespace posewire::synth
