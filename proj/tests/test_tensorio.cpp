#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "posewire/synth.hpp"
#include "posewire/tensorio.hpp"

using namespace posewire;

namespace {

std::string write_to_string(const std::vector<TensorFrame>& frames) {
  std::ostringstream out(std::ios::binary);
  write_sequence(frames, out);
  return out.str();
}

TensorIoError::Kind read_error_kind(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  try {
    read_sequence(in);
  } catch (const TensorIoError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a TensorIoError";
  return TensorIoError::Kind::kIo;
}

bool bit_identical(const std::vector<float>& a, const std::vector<float>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

}  // namespace

TEST(TensorIo, ShapeConstants) {
  EXPECT_EQ(kHeatmapChannels, 672u);
  EXPECT_EQ(kOffsetChannels, 2016u);
  EXPECT_EQ(kFrameBytes, 8429568u);
}

TEST(TensorIo, EmptySequenceIsHeaderOnly) {
  std::ostringstream out(std::ios::binary);
  EXPECT_EQ(write_sequence({}, out), 32u);
  const std::string bytes = out.str();
  ASSERT_EQ(bytes.size(), 32u);
  EXPECT_EQ(bytes.substr(0, 4), "HMOS");
  EXPECT_EQ(bytes[4], 1);
  const auto u32 = [&](std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(bytes[at + i]);
    return v;
  };
  EXPECT_EQ(u32(8), 0u);
  EXPECT_EQ(u32(12), 24u);
  EXPECT_EQ(u32(16), 28u);
  EXPECT_EQ(u32(20), 28u);
  EXPECT_EQ(u32(24), 448u);
  EXPECT_EQ(u32(28), 0u);
  EXPECT_EQ(bytes[5] | bytes[6] | bytes[7], 0);
}

TEST(TensorIo, SingleFrameSize) {
  std::ostringstream out(std::ios::binary);
  EXPECT_EQ(write_sequence(std::vector<TensorFrame>(1), out), 32u + 8429568u);
  EXPECT_EQ(out.str().size(), 32u + 8429568u);
}

TEST(TensorIo, LittleEndianPayload) {
  TensorFrame f;
  f.heatmap[0] = 1.0f;  // 0x3f800000
  const std::string bytes = write_to_string({f});
  EXPECT_EQ(static_cast<std::uint8_t>(bytes[32]), 0x00);
  EXPECT_EQ(static_cast<std::uint8_t>(bytes[34]), 0x80);
  EXPECT_EQ(static_cast<std::uint8_t>(bytes[35]), 0x3f);
}

TEST(TensorIo, RoundTripIsBitExact) {
  synth::Rng rng(42);
  std::vector<TensorFrame> frames;
  for (std::uint32_t i = 0; i < 3; ++i) {
    frames.push_back(synth::random_frame(rng, synth::FrameFlavor::kContinuous, i));
  }
  frames[1].heatmap[17] = -0.0f;
  frames[2].offsets[99] = std::numeric_limits<float>::denorm_min();

  std::istringstream in(write_to_string(frames), std::ios::binary);
  const auto back = read_sequence(in);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].frame_index, i);
    EXPECT_TRUE(bit_identical(back[i].heatmap, frames[i].heatmap));
    EXPECT_TRUE(bit_identical(back[i].offsets, frames[i].offsets));
  }
}

TEST(TensorIo, StreamingIteratorYieldsInOrder) {
  std::vector<TensorFrame> frames(2);
  frames[0].heatmap[5] = 5.0f;
  frames[1].heatmap[6] = 6.0f;
  std::istringstream in(write_to_string(frames), std::ios::binary);
  SequenceReader reader(in);
  EXPECT_EQ(reader.header().frame_count, 2u);
  std::vector<std::uint32_t> indices;
  for (const TensorFrame& f : reader) {
    indices.push_back(f.frame_index);
    EXPECT_EQ(f.heatmap[5 + f.frame_index], 5.0f + f.frame_index);
  }
  EXPECT_EQ(indices, (std::vector<std::uint32_t>{0, 1}));
  EXPECT_FALSE(reader.next().has_value());
}

TEST(TensorIo, TruncatedFrameReportsIndex) {
  std::string bytes = write_to_string(std::vector<TensorFrame>(2));
  bytes.resize(32 + kFrameBytes + 1000);
  std::istringstream in(bytes, std::ios::binary);
  SequenceReader reader(in);
  EXPECT_TRUE(reader.next().has_value());
  try {
    reader.next();
    FAIL() << "expected truncation";
  } catch (const TensorIoError& e) {
    EXPECT_EQ(e.kind(), TensorIoError::Kind::kTruncatedFrame);
    ASSERT_TRUE(e.frame_index.has_value());
    EXPECT_EQ(*e.frame_index, 1u);
  }
}

TEST(TensorIo, TruncatedInsideOffsets) {
  std::string bytes = write_to_string(std::vector<TensorFrame>(1));
  bytes.resize(bytes.size() - 4);
  EXPECT_EQ(read_error_kind(bytes), TensorIoError::Kind::kTruncatedFrame);
}

TEST(TensorIo, HeaderValidation) {
  const std::string good = write_to_string({});

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_EQ(read_error_kind(bad_magic), TensorIoError::Kind::kBadMagic);

  std::string bad_version = good;
  bad_version[4] = 2;
  EXPECT_EQ(read_error_kind(bad_version), TensorIoError::Kind::kUnsupportedVersion);

  SequenceHeader h;
  h.joint_count = 25;
  const auto hb = encode_header(h);
  EXPECT_EQ(read_error_kind(std::string(hb.begin(), hb.end())), TensorIoError::Kind::kShapeMismatch);

  EXPECT_EQ(read_error_kind(good.substr(0, 20)), TensorIoError::Kind::kTruncatedHeader);
}

TEST(TensorIo, ChannelCountMismatch) {
  // 673 channels cannot be expressed with 24 joints x 28 bins, so the
  // header's joint/bin fields must disagree with the canonical shape.
  SequenceHeader h;
  h.depth_bins = 673 / 24 + 1;
  const auto hb = encode_header(h);
  EXPECT_EQ(read_error_kind(std::string(hb.begin(), hb.end())), TensorIoError::Kind::kShapeMismatch);
  EXPECT_THROW(
      {
        TensorFrame f;
        f.heatmap.resize(673 * kCellsPerChannel);
        std::ostringstream out;
        SequenceWriter(out, 1).write(f);
      },
      TensorIoError);
}

TEST(TensorIo, NonFiniteValueReportsLocation) {
  TensorFrame f;
  f.offsets[volume_index(700, 3, 9)] = std::nanf("");
  try {
    std::istringstream in(write_to_string({f}), std::ios::binary);
    read_sequence(in);
    FAIL() << "expected a non-finite error";
  } catch (const TensorIoError& e) {
    EXPECT_EQ(e.kind(), TensorIoError::Kind::kNonFiniteValue);
    EXPECT_TRUE(e.in_offsets);
    EXPECT_EQ(e.channel.value(), 700u);
    EXPECT_EQ(e.row.value(), 3u);
    EXPECT_EQ(e.col.value(), 9u);
  }

  TensorFrame g;
  g.heatmap[volume_index(12, 0, 27)] = std::numeric_limits<float>::infinity();
  EXPECT_EQ(read_error_kind(write_to_string({g})), TensorIoError::Kind::kNonFiniteValue);
}

TEST(TensorIo, WriterRejectsExtraFrames) {
  std::ostringstream out;
  SequenceWriter w(out, 0);
  EXPECT_THROW(w.write(TensorFrame{}), std::logic_error);
}
