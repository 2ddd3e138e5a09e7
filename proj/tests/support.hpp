#pragma once

// Test-only oracles and fixtures. Nothing here calls into the module it is
// used to check.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

namespace posewire::testing {

/// Straight-line simulation of the 7-slot low-pass cascade on a scalar
/// stream. The first sample floods the window and is returned unchanged.
inline std::vector<double> simulate_cascade(const std::vector<double>& stream, double smooth) {
  std::vector<double> out;
  double h0 = 0, h1 = 0, h2 = 0, h3 = 0, h4 = 0, h5 = 0, h6 = 0;
  bool first = true;
  for (const double x : stream) {
    if (first) {
      h0 = h1 = h2 = h3 = h4 = h5 = h6 = x;
      first = false;
    } else {
      h6 = h5;
      h5 = h4;
      h4 = h3;
      h3 = h2;
      h2 = h1;
      h1 = h0;
      h0 = x;
      h1 = h0 * smooth + h1 * (1 - smooth);
      h2 = h1 * smooth + h2 * (1 - smooth);
      h3 = h2 * smooth + h3 * (1 - smooth);
      h4 = h3 * smooth + h4 * (1 - smooth);
      h5 = h4 * smooth + h5 * (1 - smooth);
      h6 = h5 * smooth + h6 * (1 - smooth);
    }
    out.push_back(h6);
  }
  return out;
}

/// Full 2-D convolution of a single-channel image with the outer product of
/// an unnormalized Gaussian, clamp-to-edge, rounded at the end.
inline std::vector<int> direct_gaussian_2d(const std::vector<std::uint8_t>& img, int w, int h, double sigma) {
  const int r = static_cast<int>(std::ceil(3 * sigma));
  double norm = 0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) norm += std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
  }
  std::vector<int> out(img.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int yy = std::min(std::max(y + dy, 0), h - 1);
          const int xx = std::min(std::max(x + dx, 0), w - 1);
          acc += std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)) * img[yy * w + xx];
        }
      }
      out[y * w + x] = static_cast<int>(std::lround(acc / norm));
    }
  }
  return out;
}

/// Fresh scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("posewire-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace posewire::testing
