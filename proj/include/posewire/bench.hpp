#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "posewire/pipeline.hpp"

namespace posewire::bench {

struct StageTiming {
  std::string stage;
  std::vector<double> samples_us;  // after warm-up exclusion
  double p50 = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
  double mean = 0.0;
  double fps = 0.0;  // 1e6 / mean
};

struct BenchOptions {
  std::uint32_t iterations = 1;
  std::optional<double> smooth = Smoother::kDefaultSmooth;
  // Also time decode_pose_parallel, reported as "decode_parallel".
  bool parallel = false;
  unsigned threads = 0;
};

struct BenchReport {
  std::vector<StageTiming> stages;  // decode, smooth, encode, total[, decode_parallel]
  std::vector<PoseFrame> outputs;   // image-space poses of the first iteration
  bool deterministic = true;        // every iteration reproduced `outputs`
  std::size_t frames_per_iteration = 0;
  std::uint32_t iterations = 0;
  std::size_t warmup_samples = 0;
  std::string hardware;

  /// Throws std::out_of_range for an unknown stage name.
  const StageTiming& stage(std::string_view name) const;
};

/// Nearest-rank percentile of ascending `sorted`, p in (0, 100].
double percentile(std::span<const double> sorted, double p);

/// Summarizes raw samples; the first 10% are dropped as warm-up.
StageTiming summarize(std::string stage, std::span<const double> samples_us);

/// Runs decode -> smooth -> encode over `iterations` passes of the source,
/// timing each stage per frame with the monotonic clock. Throws
/// std::invalid_argument if the source yields no frames.
BenchReport run_bench(FrameSource& source, const BenchOptions& options = {});

/// CPU model and thread count of this machine.
std::string hardware_description();

/// Stable text report: comment lines start with '#', then a column header
/// and one "name p50 p95 p99 mean fps" line per stage (microseconds).
std::string format_report(const BenchReport& report);

}  // namespace posewire::bench
