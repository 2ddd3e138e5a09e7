#include "posewire/pipeline.hpp"

namespace posewire {

PoseFrame to_image_space(const PoseFrame& grid_pose, const GridGeometry& geom) {
  PoseFrame out = grid_pose;
  for (JointSample& j : out.joints) j.position = grid_to_image(j.position, geom);
  return out;
}

PosePipeline::PosePipeline(std::optional<double> smooth, GridGeometry geom) : geom_(geom) {
  if (smooth) smoother_.emplace(*smooth);
}

PoseFrame PosePipeline::process(const TensorFrame& frame) { return finish(decode_pose(frame)); }

PoseFrame PosePipeline::finish(const RawPose& raw) {
  const PoseFrame grid = smoother_ ? smoother_->apply(raw) : to_pose_frame(raw);
  return to_image_space(grid, geom_);
}

void PosePipeline::reset() {
  if (smoother_) smoother_->reset();
}

bool VectorFrameSource::next(TensorFrame& frame) {
  if (pos_ >= frames_.size()) return false;
  frame = frames_[pos_++];
  return true;
}

FileFrameSource::FileFrameSource(std::filesystem::path path) : path_(std::move(path)) { rewind(); }

void FileFrameSource::rewind() {
  reader_.reset();
  in_ = std::ifstream(path_, std::ios::binary);
  if (!in_) throw TensorIoError(TensorIoError::Kind::kIo, "cannot open " + path_.string());
  reader_ = std::make_unique<SequenceReader>(in_);
}

bool FileFrameSource::next(TensorFrame& frame) { return reader_->next(frame); }

bool SynthFrameSource::next(TensorFrame& frame) {
  if (pos_ >= count_) return false;
  frame = synth::render_frame(synth::random_truth(rng_), rng_, pos_);
  ++pos_;
  return true;
}

void SynthFrameSource::rewind() {
  rng_.seed(seed_);
  pos_ = 0;
}

}  // namespace posewire
