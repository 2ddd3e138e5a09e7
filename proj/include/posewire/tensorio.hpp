#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <iterator>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "posewire/skeleton.hpp"

namespace posewire {

inline constexpr std::size_t kGridSide = 28;
inline constexpr std::size_t kDepthBins = 28;
inline constexpr std::size_t kCellsPerChannel = kGridSide * kGridSide;
inline constexpr std::size_t kHeatmapChannels = kJointCount * kDepthBins;  // 672
inline constexpr std::size_t kOffsetChannels = 3 * kHeatmapChannels;       // 2016
inline constexpr std::size_t kHeatmapSize = kHeatmapChannels * kCellsPerChannel;
inline constexpr std::size_t kOffsetSize = kOffsetChannels * kCellsPerChannel;

/// Flat index of (channel, row, column) in a channel-major, row-major volume.
constexpr std::size_t volume_index(std::size_t channel, std::size_t row, std::size_t col) {
  return (channel * kGridSide + row) * kGridSide + col;
}

/// One network output: heatmap (672, 28, 28) and offsets (2016, 28, 28).
struct TensorFrame {
  std::vector<float> heatmap = std::vector<float>(kHeatmapSize, 0.0f);
  std::vector<float> offsets = std::vector<float>(kOffsetSize, 0.0f);
  std::uint32_t frame_index = 0;

  float heat(std::size_t channel, std::size_t row, std::size_t col) const {
    return heatmap[volume_index(channel, row, col)];
  }
  float offset(std::size_t channel, std::size_t row, std::size_t col) const {
    return offsets[volume_index(channel, row, col)];
  }
  bool has_canonical_shape() const noexcept {
    return heatmap.size() == kHeatmapSize && offsets.size() == kOffsetSize;
  }

  friend bool operator==(const TensorFrame&, const TensorFrame&) = default;
};

// .hmoseq layout (all little-endian):
//   0  magic "HMOS"        4  version (1)     5..7  reserved
//   8  frame_count u32     12 joint_count u32 16 grid_side u32
//   20 depth_bins u32      24 input_side u32  28..31 reserved
// followed by frame_count frames of 672*784 heatmap floats then 2016*784
// offset floats, channel slowest, then row, then column.
inline constexpr char kSequenceMagic[4] = {'H', 'M', 'O', 'S'};
inline constexpr std::uint8_t kSequenceVersion = 1;
inline constexpr std::size_t kSequenceHeaderSize = 32;
inline constexpr std::size_t kFrameBytes = (kHeatmapSize + kOffsetSize) * sizeof(float);

struct SequenceHeader {
  std::uint32_t frame_count = 0;
  std::uint32_t joint_count = kJointCount;
  std::uint32_t grid_side = kGridSide;
  std::uint32_t depth_bins = kDepthBins;
  std::uint32_t input_side = GridGeometry::kDefaultInputSide;
};

class TensorIoError : public std::runtime_error {
 public:
  enum class Kind {
    kIo,
    kBadMagic,
    kUnsupportedVersion,
    kShapeMismatch,
    kTruncatedHeader,
    kTruncatedFrame,
    kNonFiniteValue,
  };

  TensorIoError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

  // Populated where meaningful: frame for truncation and non-finite values,
  // channel/row/col for non-finite values.
  std::optional<std::uint32_t> frame_index;
  std::optional<std::size_t> channel;
  std::optional<std::size_t> row;
  std::optional<std::size_t> col;
  bool in_offsets = false;

 private:
  Kind kind_;
};

std::vector<std::uint8_t> encode_header(const SequenceHeader& header);
/// Parses and validates a 32-byte header against the canonical shapes.
SequenceHeader decode_header(std::span<const std::uint8_t> bytes);

/// Writes a header followed by frames. The frame count is fixed up front.
class SequenceWriter {
 public:
  SequenceWriter(std::ostream& sink, std::uint32_t frame_count);

  void write(const TensorFrame& frame);
  std::size_t bytes_written() const noexcept { return bytes_; }
  std::uint32_t frames_written() const noexcept { return written_; }

 private:
  void write_floats(std::span<const float> src);

  std::ostream& sink_;
  std::uint32_t expected_;
  std::uint32_t written_ = 0;
  std::size_t bytes_ = 0;
  std::vector<std::uint8_t> scratch_;
};

/// Returns the number of bytes written.
std::size_t write_sequence(std::span<const TensorFrame> frames, std::ostream& sink);

/// Streaming reader; holds at most one frame in memory.
class SequenceReader {
 public:
  explicit SequenceReader(std::istream& source);

  const SequenceHeader& header() const noexcept { return header_; }
  /// Next frame, or nullopt once frame_count frames have been read.
  std::optional<TensorFrame> next();
  /// Reads into an existing frame to reuse its buffers.
  bool next(TensorFrame& frame);

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = TensorFrame;
    using difference_type = std::ptrdiff_t;
    using pointer = const TensorFrame*;
    using reference = const TensorFrame&;

    iterator() = default;
    explicit iterator(SequenceReader* reader) : reader_(reader) { advance(); }

    reference operator*() const { return *current_; }
    pointer operator->() const { return &*current_; }
    iterator& operator++() {
      advance();
      return *this;
    }
    void operator++(int) { advance(); }
    friend bool operator==(const iterator& a, const iterator& b) { return a.reader_ == b.reader_; }

   private:
    void advance() {
      if (!reader_) return;
      if (!current_) current_.emplace();
      if (!reader_->next(*current_)) {
        reader_ = nullptr;
        current_.reset();
      }
    }
    SequenceReader* reader_ = nullptr;
    std::optional<TensorFrame> current_;
  };

  iterator begin() { return iterator(this); }
  iterator end() { return iterator(); }

 private:
  std::size_t read_floats(std::span<float> dst);

  std::istream& source_;
  SequenceHeader header_;
  std::uint32_t next_index_ = 0;
};

/// Reads every frame of a sequence into memory.
std::vector<TensorFrame> read_sequence(std::istream& source);

}  // namespace posewire
