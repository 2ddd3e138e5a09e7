#include "posewire/tensorio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

namespace posewire {

namespace {

void put_u32(std::uint8_t* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint32_t get_u32(const std::uint8_t* in) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{in[i]} << (8 * i);
  return v;
}

void check_finite(std::span<const float> values, std::uint32_t frame_index, bool offsets) {
  const auto it = std::find_if(values.begin(), values.end(), [](float v) { return !std::isfinite(v); });
  if (it == values.end()) return;
  const auto flat = static_cast<std::size_t>(it - values.begin());
  const std::size_t channel = flat / kCellsPerChannel;
  const std::size_t row = (flat % kCellsPerChannel) / kGridSide;
  const std::size_t col = flat % kGridSide;
  TensorIoError err(TensorIoError::Kind::kNonFiniteValue,
                    "non-finite " + std::string(offsets ? "offset" : "heatmap") + " value in frame " +
                        std::to_string(frame_index) + " at channel " + std::to_string(channel) +
                        ", cell (" + std::to_string(row) + ", " + std::to_string(col) + ")");
  err.frame_index = frame_index;
  err.channel = channel;
  err.row = row;
  err.col = col;
  err.in_offsets = offsets;
  throw err;
}

void expect_field(const char* name, std::uint32_t got, std::uint32_t want) {
  if (got != want) {
    throw TensorIoError(TensorIoError::Kind::kShapeMismatch,
                        std::string("header ") + name + " is " + std::to_string(got) + ", expected " +
                            std::to_string(want));
  }
}

}  // namespace

std::vector<std::uint8_t> encode_header(const SequenceHeader& header) {
  std::vector<std::uint8_t> out(kSequenceHeaderSize, 0);
  std::memcpy(out.data(), kSequenceMagic, 4);
  out[4] = kSequenceVersion;
  put_u32(&out[8], header.frame_count);
  put_u32(&out[12], header.joint_count);
  put_u32(&out[16], header.grid_side);
  put_u32(&out[20], header.depth_bins);
  put_u32(&out[24], header.input_side);
  return out;
}

SequenceHeader decode_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSequenceHeaderSize) {
    throw TensorIoError(TensorIoError::Kind::kTruncatedHeader,
                        "sequence header truncated: " + std::to_string(bytes.size()) + " of " +
                            std::to_string(kSequenceHeaderSize) + " bytes");
  }
  if (std::memcmp(bytes.data(), kSequenceMagic, 4) != 0) {
    throw TensorIoError(TensorIoError::Kind::kBadMagic, "bad magic: not an HMOS tensor sequence");
  }
  if (bytes[4] != kSequenceVersion) {
    throw TensorIoError(TensorIoError::Kind::kUnsupportedVersion,
                        "unsupported sequence version " + std::to_string(bytes[4]));
  }
  SequenceHeader h;
  h.frame_count = get_u32(&bytes[8]);
  h.joint_count = get_u32(&bytes[12]);
  h.grid_side = get_u32(&bytes[16]);
  h.depth_bins = get_u32(&bytes[20]);
  h.input_side = get_u32(&bytes[24]);
  expect_field("joint_count", h.joint_count, kJointCount);
  expect_field("grid_side", h.grid_side, kGridSide);
  expect_field("depth_bins", h.depth_bins, kDepthBins);
  expect_field("input_side", h.input_side, GridGeometry::kDefaultInputSide);
  return h;
}

SequenceWriter::SequenceWriter(std::ostream& sink, std::uint32_t frame_count)
    : sink_(sink), expected_(frame_count) {
  SequenceHeader h;
  h.frame_count = frame_count;
  const auto bytes = encode_header(h);
  sink_.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!sink_) throw TensorIoError(TensorIoError::Kind::kIo, "failed to write sequence header");
  bytes_ = bytes.size();
}

void SequenceWriter::write(const TensorFrame& frame) {
  if (written_ >= expected_) {
    throw std::logic_error("more frames written than declared in the header");
  }
  if (!frame.has_canonical_shape()) {
    throw TensorIoError(TensorIoError::Kind::kShapeMismatch, "frame does not have the canonical shape");
  }
  write_floats(frame.heatmap);
  write_floats(frame.offsets);
  if (!sink_) {
    throw TensorIoError(TensorIoError::Kind::kIo, "failed to write frame " + std::to_string(written_));
  }
  bytes_ += kFrameBytes;
  ++written_;
}

void SequenceWriter::write_floats(std::span<const float> src) {
  if constexpr (std::endian::native == std::endian::little) {
    sink_.write(reinterpret_cast<const char*>(src.data()), static_cast<std::streamsize>(src.size_bytes()));
  } else {
    scratch_.resize(src.size_bytes());
    for (std::size_t i = 0; i < src.size(); ++i) {
      put_u32(&scratch_[4 * i], std::bit_cast<std::uint32_t>(src[i]));
    }
    sink_.write(reinterpret_cast<const char*>(scratch_.data()), static_cast<std::streamsize>(scratch_.size()));
  }
}

std::size_t write_sequence(std::span<const TensorFrame> frames, std::ostream& sink) {
  SequenceWriter writer(sink, static_cast<std::uint32_t>(frames.size()));
  for (const auto& f : frames) writer.write(f);
  sink.flush();
  return writer.bytes_written();
}

SequenceReader::SequenceReader(std::istream& source) : source_(source) {
  std::uint8_t raw[kSequenceHeaderSize];
  source_.read(reinterpret_cast<char*>(raw), kSequenceHeaderSize);
  header_ = decode_header(std::span<const std::uint8_t>(raw, static_cast<std::size_t>(source_.gcount())));
}

bool SequenceReader::next(TensorFrame& frame) {
  if (next_index_ >= header_.frame_count) return false;
  frame.heatmap.resize(kHeatmapSize);
  frame.offsets.resize(kOffsetSize);
  std::size_t got = read_floats(frame.heatmap);
  if (got == kHeatmapSize * sizeof(float)) got += read_floats(frame.offsets);
  if (got != kFrameBytes) {
    TensorIoError err(TensorIoError::Kind::kTruncatedFrame,
                      "truncated frame " + std::to_string(next_index_) + ": got " + std::to_string(got) +
                          " of " + std::to_string(kFrameBytes) + " bytes");
    err.frame_index = next_index_;
    throw err;
  }
  check_finite(frame.heatmap, next_index_, false);
  check_finite(frame.offsets, next_index_, true);
  frame.frame_index = next_index_++;
  return true;
}

std::size_t SequenceReader::read_floats(std::span<float> dst) {
  // Reads straight into the frame buffer; big-endian hosts swap in place.
  source_.read(reinterpret_cast<char*>(dst.data()), static_cast<std::streamsize>(dst.size_bytes()));
  const auto got = static_cast<std::size_t>(source_.gcount());
  if constexpr (std::endian::native != std::endian::little) {
    for (float& v : dst) {
      std::uint8_t b[4];
      std::memcpy(b, &v, 4);
      v = std::bit_cast<float>(get_u32(b));
    }
  }
  return got;
}

std::optional<TensorFrame> SequenceReader::next() {
  TensorFrame frame;
  if (!next(frame)) return std::nullopt;
  return frame;
}

std::vector<TensorFrame> read_sequence(std::istream& source) {
  SequenceReader reader(source);
  std::vector<TensorFrame> out;
  while (auto f = reader.next()) out.push_back(std::move(*f));
  return out;
}

}  // namespace posewire
