#pragma once

#include <array>
#include <cstddef>

#include "posewire/decoder.hpp"
#include "posewire/skeleton.hpp"

namespace posewire {

/// Temporal low-pass cascade over a window of the current frame plus six
/// historical frames.
///
/// Slot 0 holds the newest raw pose and slot 6 the output. Each step shifts
/// the window by one, stores the raw pose in slot 0 and sweeps forward:
///
///   slot[i] = slot[i-1] * smooth + slot[i] * (1 - smooth),   i = 1..6
///
/// so slot 6 ends up as the smoothed pose. The first frame after
/// construction or reset() fills every slot. Arithmetic runs in double per
/// joint coordinate; confidences pass through untouched.
class Smoother {
 public:
  static constexpr std::size_t kWindow = 7;
  static constexpr double kDefaultSmooth = 0.5;

  /// Throws std::invalid_argument unless 0 <= smooth < 1.
  explicit Smoother(double smooth = kDefaultSmooth);

  double smooth() const noexcept { return smooth_; }
  bool initialized() const noexcept { return initialized_; }

  /// Returns the smoothed grid-space pose; seq is the raw frame index.
  PoseFrame apply(const RawPose& raw);
  void reset() noexcept { initialized_ = false; }

 private:
  using Slot = std::array<double, kJointCount * 3>;

  double smooth_;
  bool initialized_ = false;
  std::array<Slot, kWindow> window_{};
};

}  // namespace posewire
