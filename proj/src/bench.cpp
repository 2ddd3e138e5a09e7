#include "posewire/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "posewire/wire.hpp"

namespace posewire::bench {

namespace {

using Clock = std::chrono::steady_clock;

// Keeps the encode stage observable to the optimizer.
volatile std::uint64_t g_encode_sink = 0;

double micros(Clock::duration d) { return std::chrono::duration<double, std::micro>(d).count(); }

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

const StageTiming& BenchReport::stage(std::string_view name) const {
  for (const auto& s : stages) {
    if (s.stage == name) return s;
  }
  throw std::out_of_range("no bench stage named " + std::string(name));
}

double percentile(std::span<const double> sorted, double p) {
  if (sorted.empty()) return 0.0;
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

StageTiming summarize(std::string stage, std::span<const double> samples_us) {
  StageTiming t;
  t.stage = std::move(stage);
  const std::size_t warmup = samples_us.size() / 10;
  t.samples_us.assign(samples_us.begin() + static_cast<std::ptrdiff_t>(warmup), samples_us.end());
  if (t.samples_us.empty()) return t;

  std::vector<double> sorted = t.samples_us;
  std::sort(sorted.begin(), sorted.end());
  t.p50 = percentile(sorted, 50);
  t.p95 = percentile(sorted, 95);
  t.p99 = percentile(sorted, 99);
  t.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  t.fps = t.mean > 0.0 ? 1e6 / t.mean : 0.0;
  return t;
}

BenchReport run_bench(FrameSource& source, const BenchOptions& options) {
  if (options.iterations == 0) throw std::invalid_argument("iterations must be positive");

  BenchReport report;
  report.iterations = options.iterations;
  report.hardware = hardware_description();

  std::vector<double> decode_us, smooth_us, encode_us, total_us, parallel_us;
  PosePipeline pipeline(options.smooth);
  TensorFrame frame;

  for (std::uint32_t iter = 0; iter < options.iterations; ++iter) {
    source.rewind();
    pipeline.reset();
    std::size_t index = 0;
    while (source.next(frame)) {
      const auto t0 = Clock::now();
      const RawPose raw = decode_pose(frame);
      const auto t1 = Clock::now();
      const PoseFrame pose = pipeline.finish(raw);
      const auto t2 = Clock::now();
      const wire::FrameBytes bytes = wire::encode_frame(pose);
      const auto t3 = Clock::now();
      g_encode_sink = g_encode_sink + bytes[18];

      decode_us.push_back(micros(t1 - t0));
      smooth_us.push_back(micros(t2 - t1));
      encode_us.push_back(micros(t3 - t2));
      total_us.push_back(micros(t3 - t0));

      if (options.parallel) {
        const auto p0 = Clock::now();
        const RawPose par = decode_pose_parallel(frame, options.threads);
        parallel_us.push_back(micros(Clock::now() - p0));
        if (par != raw) report.deterministic = false;
      }

      if (iter == 0) {
        report.outputs.push_back(pose);
      } else if (index >= report.outputs.size() || report.outputs[index] != pose) {
        report.deterministic = false;
      }
      ++index;
    }
    if (iter == 0) report.frames_per_iteration = index;
    if (index == 0) throw std::invalid_argument("bench needs at least one frame");
  }

  report.warmup_samples = total_us.size() / 10;
  report.stages.push_back(summarize("decode", decode_us));
  report.stages.push_back(summarize("smooth", smooth_us));
  report.stages.push_back(summarize("encode", encode_us));
  report.stages.push_back(summarize("total", total_us));
  if (options.parallel) report.stages.push_back(summarize("decode_parallel", parallel_us));
  return report;
}

std::string hardware_description() {
  std::string model = "unknown cpu";
  std::ifstream cpuinfo("/proc/cpuinfo");
  for (std::string line; std::getline(cpuinfo, line);) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) model = line.substr(line.find_first_not_of(' ', colon + 1));
      break;
    }
  }
  return model + ", " + std::to_string(std::thread::hardware_concurrency()) + " hardware threads";
}

std::string format_report(const BenchReport& report) {
  std::string out;
  out += "# posewire bench: frames=" + std::to_string(report.frames_per_iteration) +
         " iterations=" + std::to_string(report.iterations) +
         " warmup_samples=" + std::to_string(report.warmup_samples) + "\n";
  out += "# hardware: " + report.hardware + "\n";
  out += "stage p50_us p95_us p99_us mean_us fps\n";
  for (const auto& s : report.stages) {
    out += s.stage + " " + fixed3(s.p50) + " " + fixed3(s.p95) + " " + fixed3(s.p99) + " " + fixed3(s.mean) +
           " " + fixed3(s.fps) + "\n";
  }
  return out;
}

}  // namespace posewire::bench
