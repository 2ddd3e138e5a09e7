#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <vector>

#include "posewire/decoder.hpp"
#include "posewire/smoothing.hpp"
#include "posewire/synth.hpp"
#include "posewire/tensorio.hpp"

namespace posewire {

/// Scales every joint of a grid-space pose to image space.
PoseFrame to_image_space(const PoseFrame& grid_pose, const GridGeometry& geom = {});

/// decode -> optional smoothing -> image space.
class PosePipeline {
 public:
  /// No smoothing when `smooth` is empty.
  explicit PosePipeline(std::optional<double> smooth = Smoother::kDefaultSmooth, GridGeometry geom = {});

  PoseFrame process(const TensorFrame& frame);
  /// Same as process() for an already-decoded pose.
  PoseFrame finish(const RawPose& raw);
  void reset();

 private:
  GridGeometry geom_;
  std::optional<Smoother> smoother_;
};

/// Rewindable sequence of tensor frames.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  /// Fills `frame` and returns true, or returns false at the end.
  virtual bool next(TensorFrame& frame) = 0;
  virtual void rewind() = 0;
};

class VectorFrameSource : public FrameSource {
 public:
  explicit VectorFrameSource(std::vector<TensorFrame> frames) : frames_(std::move(frames)) {}
  bool next(TensorFrame& frame) override;
  void rewind() override { pos_ = 0; }

 private:
  std::vector<TensorFrame> frames_;
  std::size_t pos_ = 0;
};

/// Streams an .hmoseq file; rewind() reopens it.
class FileFrameSource : public FrameSource {
 public:
  /// Throws TensorIoError (kIo) if the file cannot be opened.
  explicit FileFrameSource(std::filesystem::path path);
  bool next(TensorFrame& frame) override;
  void rewind() override;
  const SequenceHeader& header() const { return reader_->header(); }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::unique_ptr<SequenceReader> reader_;
};

/// Deterministically renders `count` random poses from `seed`; rewind()
/// replays the identical frames.
class SynthFrameSource : public FrameSource {
 public:
  SynthFrameSource(std::uint32_t count, std::uint64_t seed) : count_(count), seed_(seed), rng_(seed) {}
  bool next(TensorFrame& frame) override;
  void rewind() override;

 private:
  std::uint32_t count_;
  std::uint64_t seed_;
  synth::Rng rng_;
  std::uint32_t pos_ = 0;
};

}  // namespace posewire
