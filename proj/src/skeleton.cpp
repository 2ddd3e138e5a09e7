#include "posewire/skeleton.hpp"

#include <algorithm>
#include <cmath>

namespace posewire {

JointId joint_index(std::string_view name) {
  const auto it = std::find(kJointNames.begin(), kJointNames.end(), name);
  if (it == kJointNames.end()) throw UnknownJointError(std::string(name));
  return JointId(static_cast<std::size_t>(it - kJointNames.begin()));
}

GridGeometry::GridGeometry(std::uint32_t input_side, std::uint32_t grid_side,
                           std::uint32_t depth_bins)
    : input_side_(input_side), grid_side_(grid_side), depth_bins_(depth_bins) {
  if (grid_side == 0 || input_side % grid_side != 0) {
    throw std::invalid_argument("input side must be a positive multiple of the grid side");
  }
  if (depth_bins != grid_side) {
    throw std::invalid_argument("depth bins must equal the grid side");
  }
}

namespace {

std::array<std::optional<JointId>, kJointCount> default_parents() {
  std::array<std::optional<JointId>, kJointCount> p{};
  auto link = [&p](std::string_view child, std::string_view parent) {
    p[joint_index(child).index()] = joint_index(parent);
  };
  for (const char side : {'r', 'l'}) {
    const std::string s(1, side);
    link(s + "ShldrBend", "abdomenUpper");
    link(s + "ForearmBend", s + "ShldrBend");
    link(s + "Hand", s + "ForearmBend");
    link(s + "Thumb2", s + "Hand");
    link(s + "Mid1", s + "Hand");
    link(s + "ThighBend", "abdomenUpper");
    link(s + "Shin", s + "ThighBend");
    link(s + "Foot", s + "Shin");
    link(s + "Toe", s + "Foot");
    link(s + "Eye", "Nose");
    link(s + "Ear", s + "Eye");
  }
  link("Nose", "abdomenUpper");
  return p;
}

}  // namespace

SkeletonTopology::SkeletonTopology() : SkeletonTopology(default_parents()) {}

SkeletonTopology::SkeletonTopology(const std::array<std::optional<JointId>, kJointCount>& parent)
    : parent_(parent) {
  int roots = 0;
  for (const JointId j : all_joints()) {
    if (!parent_[j.index()]) {
      root_ = j;
      ++roots;
    }
  }
  if (roots != 1) throw std::invalid_argument("skeleton must have exactly one root");

  // Every joint must reach the root within kJointCount steps, otherwise it
  // sits on a cycle.
  for (const JointId j : all_joints()) {
    JointId cur = j;
    std::size_t steps = 0;
    while (parent_[cur.index()]) {
      cur = *parent_[cur.index()];
      if (++steps > kJointCount) throw std::invalid_argument("skeleton parent graph has a cycle");
    }
  }

  for (const JointId j : all_joints()) {
    if (const auto p = parent_[j.index()]) bones_.push_back({*p, j});
  }
}

std::vector<JointId> SkeletonTopology::children(JointId j) const {
  std::vector<JointId> out;
  for (const Bone& b : bones_) {
    if (b.parent == j) out.push_back(b.child);
  }
  return out;
}

std::vector<JointId> SkeletonTopology::depth_first() const {
  std::vector<JointId> order;
  std::vector<JointId> pending{root_};
  while (!pending.empty()) {
    const JointId j = pending.back();
    pending.pop_back();
    order.push_back(j);
    auto kids = children(j);
    pending.insert(pending.end(), kids.rbegin(), kids.rend());
  }
  return order;
}

std::vector<BoneLength> bone_lengths(const PoseFrame& pose, const SkeletonTopology& topo) {
  std::vector<BoneLength> out;
  out.reserve(topo.bones().size());
  for (const Bone& b : topo.bones()) {
    const Vec3& a = pose.joints[b.parent.index()].position;
    const Vec3& c = pose.joints[b.child.index()].position;
    const double dx = double(c.x) - a.x;
    const double dy = double(c.y) - a.y;
    const double dz = double(c.z) - a.z;
    out.push_back({b, static_cast<float>(std::sqrt(dx * dx + dy * dy + dz * dz))});
  }
  return out;
}

}  // namespace posewire
