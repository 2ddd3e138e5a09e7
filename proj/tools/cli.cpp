#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "posewire/bench.hpp"
#include "posewire/log.hpp"
#include "posewire/pipeline.hpp"
#include "posewire/preprocess.hpp"
#include "posewire/server.hpp"
#include "posewire/synth.hpp"
#include "posewire/tensorio.hpp"
#include "posewire/wire.hpp"

namespace posewire::cli {

namespace {

constexpr const char* kSubcommands = "decode, stream, tail, bench, synth, blur";

const CLI::Validator kSmoothRange(
    [](std::string& value) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(value);
      } catch (const std::exception&) {
        return "smoothing coefficient must be a number in [0, 1), got " + value;
      }
      if (!(v >= 0.0 && v < 1.0)) return "smoothing coefficient must lie in [0, 1), got " + value;
      return {};
    },
    "in [0, 1)");

std::string formats_footer() {
  std::ostringstream s;
  s << "Formats:\n"
    << "  tensor sequence .hmoseq version " << int(kSequenceVersion) << " (magic HMOS, 32-byte header, "
    << "672x28x28 heatmap + 2016x28x28 offsets, f32 little-endian)\n"
    << "  wire protocol version " << int(wire::kVersion) << " (magic POSE, fixed " << wire::kFrameSize
    << "-byte frames, little-endian)\n"
    << "Environment:\n"
    << "  POSEWIRE_LOG=error|info|debug   diagnostic verbosity (default error)\n";
  return s.str();
}

void add_smoothing(CLI::App* sub, double& smooth, bool& no_smooth) {
  sub->add_option("--smooth", smooth, "Low-pass coefficient in [0, 1)")
      ->check(kSmoothRange)
      ->capture_default_str();
  sub->add_flag("--no-smooth", no_smooth, "Bypass temporal smoothing");
}

// Real formatting shared by decode and tail output.
void put_real(std::ostream& out, float v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), " %.6f", static_cast<double>(v));
  out << buf;
}

void put_joints(std::ostream& out, const PoseFrame& pose) {
  for (const JointSample& j : pose.joints) {
    put_real(out, j.position.x);
    put_real(out, j.position.y);
    put_real(out, j.position.z);
    put_real(out, j.confidence);
  }
}

std::filesystem::path default_truth_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  p.replace_extension(".truth.txt");
  return p;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  double smooth = 0.5;
  bool no_smooth = false;
  std::string log_level;

  CLI::App app{"posewire: 3D pose decoding, smoothing and streaming toolkit", "posewire"};
  app.footer(formats_footer());
  app.require_subcommand(1);
  app.add_option("--log", log_level, "Diagnostic verbosity, overrides POSEWIRE_LOG")
      ->check(CLI::IsMember({"error", "info", "debug"}));

  auto* decode = app.add_subcommand("decode", "Decode a tensor sequence into one text line per frame");
  decode->add_option("--in", cfg.input, "Input .hmoseq file")->required();
  add_smoothing(decode, smooth, no_smooth);

  auto* stream = app.add_subcommand("stream", "Decode a sequence and broadcast pose frames over TCP");
  stream->add_option("--in", cfg.input, "Input .hmoseq file")->required();
  stream->add_option("--bind", cfg.endpoint, "Listen endpoint host:port")->required();
  stream->add_option("--fps", cfg.fps, "Replay rate; 0 publishes as fast as possible")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  stream->add_option("--wait", cfg.wait_subscribers, "Subscribers to wait for before the first frame")
      ->capture_default_str();
  add_smoothing(stream, smooth, no_smooth);

  auto* tail = app.add_subcommand("tail", "Connect to a stream and print frames as text");
  tail->add_option("endpoint", cfg.endpoint, "Server endpoint host:port")->required();
  tail->add_option("--count", cfg.count, "Stop after this many frames (0 = until the stream ends)");

  auto* bench = app.add_subcommand("bench", "Measure per-stage pipeline latency");
  auto* bench_in = bench->add_option("--in", cfg.input, "Input .hmoseq file");
  std::uint32_t bench_synth = 0;
  auto* bench_synth_opt =
      bench->add_option("--synth", bench_synth, "Use N synthetic frames instead of --in")->check(CLI::PositiveNumber);
  bench_in->excludes(bench_synth_opt);
  bench->add_option("--iters", cfg.iterations, "Passes over the sequence")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--seed", cfg.seed, "Seed for --synth")->capture_default_str();
  bench->add_flag("--parallel", cfg.parallel, "Also time multi-threaded decoding");
  add_smoothing(bench, smooth, no_smooth);

  auto* synth = app.add_subcommand("synth", "Render a synthetic sequence with a ground-truth sidecar");
  synth->add_option("--frames", cfg.frames, "Number of frames")->capture_default_str();
  synth->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  synth->add_option("--out", cfg.output, "Output .hmoseq file")->required();
  synth->add_option("--truth", cfg.truth, "Ground-truth text file (default: <out>.truth.txt)");

  auto* blur = app.add_subcommand("blur", "Blur frame backgrounds using person masks");
  blur->add_option("--frames", cfg.frames_dir, "Directory of NNNNNN.ppm frames")->required();
  blur->add_option("--masks", cfg.masks_dir, "Directory of NNNNNN.pgm masks")->required();
  blur->add_option("--sigma", cfg.sigma, "Gaussian sigma in pixels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  blur->add_option("--feather", cfg.feather, "Mask feather radius in pixels")->capture_default_str();
  blur->add_option("--out", cfg.output, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::ostringstream out, err;
    app.exit(e, out, err);
    throw UsageError(out.str(), 0);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    if (app.get_subcommands().empty()) msg += "\nvalid subcommands: " + std::string(kSubcommands);
    msg += "\nRun with --help for more information.";
    throw UsageError(msg, 2);
  }

  if (decode->parsed()) cfg.command = Command::kDecode;
  if (stream->parsed()) cfg.command = Command::kStream;
  if (tail->parsed()) cfg.command = Command::kTail;
  if (bench->parsed()) {
    cfg.command = Command::kBench;
    if (bench_synth > 0) cfg.synth_frames = bench_synth;
    if (!bench_synth_opt->count() && !bench_in->count()) throw UsageError("bench needs --in or --synth", 2);
  }
  if (synth->parsed()) {
    cfg.command = Command::kSynth;
    if (cfg.truth.empty()) cfg.truth = default_truth_path(cfg.output);
  }
  if (blur->parsed()) cfg.command = Command::kBlur;

  cfg.smooth = no_smooth ? std::nullopt : std::optional<double>(smooth);
  if (!log_level.empty()) cfg.log_level = log_level;
  if (cfg.command == Command::kStream || cfg.command == Command::kTail) {
    try {
      stream::parse_endpoint(cfg.endpoint);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what(), 2);
    }
  }
  return cfg;
}

int run_decode(const RunConfig& cfg, std::ostream& out) {
  FileFrameSource source(cfg.input);
  PosePipeline pipeline(cfg.smooth);
  TensorFrame frame;
  while (source.next(frame)) {
    const PoseFrame pose = pipeline.process(frame);
    out << frame.frame_index;
    put_joints(out, pose);
    out << '\n';
  }
  out.flush();
  return 0;
}

int run_stream(const RunConfig& cfg) {
  FileFrameSource source(cfg.input);
  PosePipeline pipeline(cfg.smooth);

  stream::ServerOptions opts;
  opts.bind = stream::parse_endpoint(cfg.endpoint);
  stream::PoseServer server(opts);
  log::info("streaming " + cfg.input.string() + " on port " + std::to_string(server.port()));
  if (cfg.wait_subscribers > 0) {
    while (!server.wait_for_subscribers(cfg.wait_subscribers, std::chrono::seconds(1))) {
      log::debug("waiting for subscribers");
    }
  }

  TensorFrame frame;
  const auto published = stream::serve(
      server,
      [&]() -> std::optional<PoseFrame> {
        if (!source.next(frame)) return std::nullopt;
        return pipeline.process(frame);
      },
      cfg.fps);
  server.stop();
  const auto stats = server.stats();
  log::info("published " + std::to_string(published) + " frames to " + std::to_string(stats.accepted) +
            " subscribers (" + std::to_string(stats.dropped_slow) + " dropped as slow)");
  return 0;
}

int run_tail(const RunConfig& cfg, std::ostream& out) {
  stream::PoseClient client(stream::parse_endpoint(cfg.endpoint));
  std::uint64_t printed = 0;
  while (cfg.count == 0 || printed < cfg.count) {
    const auto pose = client.next();
    if (!pose) break;
    out << pose->seq << ' ' << pose->timestamp_us;
    put_joints(out, *pose);
    out << '\n';
    ++printed;
  }
  out.flush();
  return 0;
}

int run_bench(const RunConfig& cfg, std::ostream& out) {
  std::unique_ptr<FrameSource> source;
  if (cfg.synth_frames) {
    source = std::make_unique<SynthFrameSource>(*cfg.synth_frames, cfg.seed);
  } else {
    source = std::make_unique<FileFrameSource>(cfg.input);
  }
  bench::BenchOptions opts;
  opts.iterations = cfg.iterations;
  opts.smooth = cfg.smooth;
  opts.parallel = cfg.parallel;
  const auto report = bench::run_bench(*source, opts);
  out << bench::format_report(report);
  return report.deterministic ? 0 : 1;
}

int run_synth(const RunConfig& cfg) {
  std::ofstream seq(cfg.output, std::ios::binary);
  if (!seq) throw TensorIoError(TensorIoError::Kind::kIo, "cannot create " + cfg.output.string());
  std::ofstream truth(cfg.truth);
  if (!truth) throw TensorIoError(TensorIoError::Kind::kIo, "cannot create " + cfg.truth.string());

  // Positions on a 1/64-cell lattice survive 6-decimal text exactly.
  constexpr float kQuantum = 1.0f / 64.0f;
  synth::Rng rng(cfg.seed);
  SequenceWriter writer(seq, cfg.frames);
  for (std::uint32_t i = 0; i < cfg.frames; ++i) {
    const auto gt = synth::random_truth(rng, kQuantum);
    writer.write(synth::render_frame(gt, rng, i));
    for (std::size_t j = 0; j < kJointCount; ++j) {
      char buf[96];
      const Vec3& p = gt.positions[j];
      std::snprintf(buf, sizeof(buf), "%s%.6f %.6f %.6f", j == 0 ? "" : " ", double(p.x), double(p.y),
                    double(p.z));
      truth << buf;
    }
    truth << '\n';
  }
  seq.flush();
  truth.flush();
  if (!seq || !truth) throw TensorIoError(TensorIoError::Kind::kIo, "failed writing synth output");
  log::info("wrote " + std::to_string(cfg.frames) + " frames to " + cfg.output.string());
  return 0;
}

int run_blur(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(cfg.frames_dir)) throw ImageError("not a directory: " + cfg.frames_dir.string());
  std::vector<fs::path> frames;
  for (const auto& entry : fs::directory_iterator(cfg.frames_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") frames.push_back(entry.path());
  }
  std::sort(frames.begin(), frames.end());

  // Every pairing is checked before any output is written.
  for (const auto& f : frames) {
    const fs::path mask = cfg.masks_dir / f.stem().replace_extension(".pgm");
    if (!fs::exists(mask)) throw ImageError("missing mask " + mask.string() + " for frame " + f.string());
  }
  fs::create_directories(cfg.output);

  BlurOptions opts;
  opts.sigma = cfg.sigma;
  opts.feather = cfg.feather;
  for (const auto& f : frames) {
    const RasterImage frame = read_pnm(f);
    if (frame.channels != 3) throw ImageError(f.string() + " is not an RGB (P6) frame");
    const BinaryMask mask = threshold_mask(read_pnm(cfg.masks_dir / f.stem().replace_extension(".pgm")));
    write_pnm(blur_background(frame, mask, opts), cfg.output / f.filename());
    log::debug("blurred " + f.string());
  }
  log::info("blurred " + std::to_string(frames.size()) + " frames into " + cfg.output.string());
  return 0;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.log_level) {
    log::Level lvl;
    if (log::parse_level(*cfg.log_level, lvl)) log::set_level(lvl);
  }
  try {
    switch (cfg.command) {
      case Command::kDecode: return run_decode(cfg, out);
      case Command::kStream: return run_stream(cfg);
      case Command::kTail: return run_tail(cfg, out);
      case Command::kBench: return run_bench(cfg, out);
      case Command::kSynth: return run_synth(cfg);
      case Command::kBlur: return run_blur(cfg);
    }
  } catch (const TensorIoError& e) {
    err << "posewire: tensorio: " << e.what() << '\n';
  } catch (const wire::WireError& e) {
    err << "posewire: stream: " << e.what() << '\n';
  } catch (const stream::StreamError& e) {
    err << "posewire: stream: " << e.what() << '\n';
  } catch (const ImageError& e) {
    err << "posewire: preprocess: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "posewire: " << e.what() << '\n';
  }
  return 1;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const UsageError& e) {
    (e.exit_code() == 0 ? out : err) << e.what() << (e.exit_code() == 0 ? "" : "\n");
    return e.exit_code();
  }
  return run(cfg, out, err);
}

}  // namespace posewire::cli
