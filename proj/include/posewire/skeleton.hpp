#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace posewire {

inline constexpr std::size_t kJointCount = 24;

// Canonical joint order. Files, the wire protocol and the decoder all index
// joints by position in this list.
inline constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "rShldrBend", "rForearmBend", "rHand",     "rThumb2",    "rMid1",
    "lShldrBend", "lForearmBend", "lHand",     "lThumb2",    "lMid1",
    "lEar",       "lEye",         "rEar",      "rEye",       "Nose",
    "rThighBend", "rShin",        "rFoot",     "rToe",       "lThighBend",
    "lShin",      "lFoot",        "lToe",      "abdomenUpper"};

class UnknownJointError : public std::invalid_argument {
 public:
  explicit UnknownJointError(std::string name)
      : std::invalid_argument("unknown joint name: '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Index of one of the 24 canonical joints.
class JointId {
 public:
  constexpr JointId() = default;
  /// Throws std::out_of_range for index >= 24.
  constexpr explicit JointId(std::size_t index) : index_(static_cast<std::uint8_t>(index)) {
    if (index >= kJointCount) throw std::out_of_range("joint index out of range");
  }

  constexpr std::size_t index() const noexcept { return index_; }
  constexpr std::string_view name() const noexcept { return kJointNames[index_]; }

  friend constexpr bool operator==(JointId, JointId) = default;
  friend constexpr auto operator<=>(JointId, JointId) = default;

 private:
  std::uint8_t index_ = 0;
};

/// Case-sensitive lookup by canonical name; throws UnknownJointError.
JointId joint_index(std::string_view name);

/// All joints in canonical order.
constexpr std::array<JointId, kJointCount> all_joints() {
  std::array<JointId, kJointCount> out{};
  for (std::size_t i = 0; i < kJointCount; ++i) out[i] = JointId(i);
  return out;
}

struct Vec3 {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

/// Input resolution and heatmap grid of the pose network.
class GridGeometry {
 public:
  static constexpr std::uint32_t kDefaultInputSide = 448;
  static constexpr std::uint32_t kDefaultGridSide = 28;

  constexpr GridGeometry() = default;
  /// Throws std::invalid_argument unless input_side is an exact multiple of
  /// grid_side and depth_bins == grid_side.
  GridGeometry(std::uint32_t input_side, std::uint32_t grid_side, std::uint32_t depth_bins);

  constexpr std::uint32_t input_side() const noexcept { return input_side_; }
  constexpr std::uint32_t grid_side() const noexcept { return grid_side_; }
  constexpr std::uint32_t depth_bins() const noexcept { return depth_bins_; }
  constexpr std::uint32_t stride() const noexcept { return input_side_ / grid_side_; }

  friend constexpr bool operator==(const GridGeometry&, const GridGeometry&) = default;

 private:
  std::uint32_t input_side_ = kDefaultInputSide;
  std::uint32_t grid_side_ = kDefaultGridSide;
  std::uint32_t depth_bins_ = kDefaultGridSide;
};

/// Scales x and y from grid cells to input pixels; z stays in grid units.
constexpr Vec3 grid_to_image(const Vec3& grid_pos, const GridGeometry& geom = {}) {
  const auto s = static_cast<float>(geom.stride());
  return {grid_pos.x * s, grid_pos.y * s, grid_pos.z};
}

struct Bone {
  JointId parent;
  JointId child;
  friend constexpr bool operator==(const Bone&, const Bone&) = default;
};

/// Kinematic tree rooted at abdomenUpper. Only used for diagnostics.
class SkeletonTopology {
 public:
  /// The default human tree.
  SkeletonTopology();
  /// Builds from an explicit parent table; throws std::invalid_argument
  /// unless there is exactly one root and every joint reaches it.
  explicit SkeletonTopology(const std::array<std::optional<JointId>, kJointCount>& parent);

  std::optional<JointId> parent(JointId j) const { return parent_[j.index()]; }
  JointId root() const noexcept { return root_; }
  /// One bone per non-root joint, ordered by child index.
  const std::vector<Bone>& bones() const noexcept { return bones_; }
  std::vector<JointId> children(JointId j) const;
  /// Pre-order traversal from the root.
  std::vector<JointId> depth_first() const;

 private:
  std::array<std::optional<JointId>, kJointCount> parent_{};
  JointId root_{};
  std::vector<Bone> bones_;
};

struct BoneLength {
  Bone bone;
  float length = 0.0f;
};

struct JointSample {
  Vec3 position;
  float confidence = 0.0f;
  friend constexpr bool operator==(const JointSample&, const JointSample&) = default;
};

/// One timestamped pose: 24 joints in canonical order.
struct PoseFrame {
  std::uint32_t seq = 0;
  std::uint64_t timestamp_us = 0;
  std::array<JointSample, kJointCount> joints{};

  friend constexpr bool operator==(const PoseFrame&, const PoseFrame&) = default;
};

/// Euclidean length of every bone, ordered by child joint index.
std::vector<BoneLength> bone_lengths(const PoseFrame& pose, const SkeletonTopology& topo = {});

}  // namespace posewire
