#include <gtest/gtest.h>

#include <sstream>

#include "posewire/bench.hpp"

using namespace posewire;
using namespace posewire::bench;

TEST(Percentile, NearestRank) {
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  EXPECT_EQ(percentile(v, 50), 5);
  EXPECT_EQ(percentile(v, 95), 10);
  EXPECT_EQ(percentile(v, 99), 10);
  EXPECT_EQ(percentile(v, 10), 1);
  EXPECT_EQ(percentile(v, 11), 2);
  EXPECT_EQ(percentile(std::vector<double>{}, 50), 0);
  EXPECT_EQ(percentile(std::vector<double>{42}, 1), 42);
}

TEST(Summarize, DropsWarmupAndOrdersPercentiles) {
  std::vector<double> samples(100);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = i < 10 ? 1e6 : double(199 - i);
  const StageTiming t = summarize("x", samples);
  EXPECT_EQ(t.samples_us.size(), 90u);
  EXPECT_LE(t.p50, t.p95);
  EXPECT_LE(t.p95, t.p99);
  EXPECT_LT(t.p99, 1e6);  // the warm-up outliers are gone
  EXPECT_DOUBLE_EQ(t.mean, (100.0 + 189.0) / 2.0);
  EXPECT_DOUBLE_EQ(t.fps, 1e6 / t.mean);
}

TEST(RunBench, StagesAreConsistentAndDeterministic) {
  SynthFrameSource source(20, 3);
  BenchOptions opts;
  opts.iterations = 3;
  const BenchReport r = run_bench(source, opts);
  EXPECT_TRUE(r.deterministic);
  EXPECT_EQ(r.frames_per_iteration, 20u);
  EXPECT_EQ(r.outputs.size(), 20u);
  EXPECT_EQ(r.warmup_samples, 6u);
  ASSERT_EQ(r.stages.size(), 4u);
  for (const char* name : {"decode", "smooth", "encode", "total"}) {
    const StageTiming& s = r.stage(name);
    EXPECT_EQ(s.samples_us.size(), 54u);
    EXPECT_LE(s.p50, s.p95);
    EXPECT_LE(s.p95, s.p99);
    EXPECT_GT(s.mean, 0.0);
    EXPECT_NEAR(s.fps, 1e6 / s.mean, 1e-9 * s.fps);
  }
  EXPECT_GE(r.stage("total").mean, r.stage("decode").mean);
  EXPECT_THROW(r.stage("render"), std::out_of_range);

  // The outputs are the pipeline's image-space poses.
  source.rewind();
  PosePipeline pipeline;
  TensorFrame frame;
  for (const PoseFrame& expected : r.outputs) {
    ASSERT_TRUE(source.next(frame));
    EXPECT_EQ(pipeline.process(frame), expected);
  }
}

TEST(RunBench, ParallelStageAgrees) {
  SynthFrameSource source(5, 9);
  BenchOptions opts;
  opts.parallel = true;
  opts.threads = 4;
  const BenchReport r = run_bench(source, opts);
  EXPECT_TRUE(r.deterministic);
  ASSERT_EQ(r.stages.size(), 5u);
  EXPECT_EQ(r.stages.back().stage, "decode_parallel");
}

TEST(RunBench, RejectsEmptySourceAndZeroIterations) {
  VectorFrameSource empty({});
  EXPECT_THROW(run_bench(empty), std::invalid_argument);
  SynthFrameSource one(1, 0);
  BenchOptions opts;
  opts.iterations = 0;
  EXPECT_THROW(run_bench(one, opts), std::invalid_argument);
}

TEST(FormatReport, MachineParsable) {
  SynthFrameSource source(10, 1);
  const BenchReport r = run_bench(source);
  std::istringstream in(format_report(r));
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line, "# posewire bench: frames=10 iterations=1 warmup_samples=1");
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line.rfind("# hardware: ", 0), 0u);
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line, "stage p50_us p95_us p99_us mean_us fps");
  std::vector<std::string> names;
  while (std::getline(in, line)) {
    std::istringstream cols(line);
    std::string name;
    double p50, p95, p99, mean, fps;
    ASSERT_TRUE(cols >> name >> p50 >> p95 >> p99 >> mean >> fps) << line;
    std::string extra;
    EXPECT_FALSE(cols >> extra);
    EXPECT_LE(p50, p95);
    names.push_back(name);
  }
  EXPECT_EQ(names, (std::vector<std::string>{"decode", "smooth", "encode", "total"}));
}

TEST(Hardware, DescribesThreads) {
  EXPECT_NE(hardware_description().find("hardware threads"), std::string::npos);
}
