#include "posewire/smoothing.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace posewire {

Smoother::Smoother(double smooth) : smooth_(smooth) {
  if (!(smooth >= 0.0 && smooth < 1.0)) {
    throw std::invalid_argument("smoothing coefficient must lie in [0, 1), got " + std::to_string(smooth));
  }
}

PoseFrame Smoother::apply(const RawPose& raw) {
  Slot incoming;
  for (std::size_t j = 0; j < kJointCount; ++j) {
    incoming[3 * j] = raw.joints[j].grid_pos.x;
    incoming[3 * j + 1] = raw.joints[j].grid_pos.y;
    incoming[3 * j + 2] = raw.joints[j].grid_pos.z;
  }

  if (!initialized_) {
    window_.fill(incoming);
    initialized_ = true;
  } else {
    for (std::size_t i = kWindow - 1; i > 0; --i) window_[i] = window_[i - 1];
    window_[0] = incoming;
    const double keep = 1.0 - smooth_;
    for (std::size_t i = 1; i < kWindow; ++i) {
      for (std::size_t c = 0; c < incoming.size(); ++c) {
        window_[i][c] = window_[i - 1][c] * smooth_ + window_[i][c] * keep;
      }
    }
  }

  const Slot& out = window_.back();
  PoseFrame frame;
  frame.seq = raw.frame_index;
  for (std::size_t j = 0; j < kJointCount; ++j) {
    frame.joints[j].position = {static_cast<float>(out[3 * j]), static_cast<float>(out[3 * j + 1]),
                                static_cast<float>(out[3 * j + 2])};
    frame.joints[j].confidence = raw.joints[j].confidence;
  }
  return frame;
}

}  // namespace posewire
