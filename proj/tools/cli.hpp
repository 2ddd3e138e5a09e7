#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace posewire::cli {

enum class Command { kDecode, kStream, kTail, kBench, kSynth, kBlur };

struct RunConfig {
  Command command = Command::kDecode;

  std::filesystem::path input;
  std::filesystem::path output;
  std::filesystem::path truth;  // synth sidecar; defaults next to output

  std::optional<double> smooth = 0.5;  // empty with --no-smooth
  double fps = 30.0;
  std::size_t wait_subscribers = 0;

  std::filesystem::path frames_dir;
  std::filesystem::path masks_dir;
  double sigma = 8.0;
  std::size_t feather = 0;

  std::string endpoint;  // --bind for stream, positional for tail
  std::uint64_t count = 0;  // tail: frames to print, 0 = until the stream ends

  std::uint32_t frames = 1;
  std::uint64_t seed = 0;
  std::uint32_t iterations = 1;
  std::optional<std::uint32_t> synth_frames;  // bench without --in
  bool parallel = false;

  std::optional<std::string> log_level;
};

/// Bad command line. what() is the diagnostic; exit_code() is 0 for --help.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& message, int exit_code) : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

/// Throws UsageError for unknown subcommands or flags and for values that
/// violate module preconditions.
RunConfig parse_args(const std::vector<std::string>& args);

/// Executes a parsed command. Data goes to `out`, diagnostics to `err`.
/// Returns the process exit status.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int run_decode(const RunConfig& cfg, std::ostream& out);
int run_stream(const RunConfig& cfg);
int run_tail(const RunConfig& cfg, std::ostream& out);
int run_bench(const RunConfig& cfg, std::ostream& out);
int run_synth(const RunConfig& cfg);
int run_blur(const RunConfig& cfg);

/// parse_args + run, with usage errors reported on `err`. args excludes argv[0].
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace posewire::cli
