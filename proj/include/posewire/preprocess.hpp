#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace posewire {

/// 8-bit raster, row-major, channels interleaved.
struct RasterImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 1;  // 1 (gray) or 3 (RGB)
  std::vector<std::uint8_t> pixels;

  RasterImage() = default;
  RasterImage(std::size_t w, std::size_t h, std::size_t c, std::uint8_t fill = 0);

  std::uint8_t& at(std::size_t x, std::size_t y, std::size_t c = 0) {
    return pixels[(y * width + x) * channels + c];
  }
  std::uint8_t at(std::size_t x, std::size_t y, std::size_t c = 0) const {
    return pixels[(y * width + x) * channels + c];
  }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;
};

/// Person segmentation; true marks foreground.
struct BinaryMask {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<bool> bits;

  BinaryMask() = default;
  BinaryMask(std::size_t w, std::size_t h, bool fill = false) : width(w), height(h), bits(w * h, fill) {}

  bool at(std::size_t x, std::size_t y) const { return bits[y * width + x]; }
  void set(std::size_t x, std::size_t y, bool on) { bits[y * width + x] = on; }
};

class ImageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Foreground where the gray value is >= 128. Throws ImageError on
/// multi-channel input.
BinaryMask threshold_mask(const RasterImage& gray);

/// Normalized 1-D Gaussian taps for offsets -radius..radius, radius = ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with clamp-to-edge borders, rounded to nearest.
/// Throws std::invalid_argument for sigma <= 0.
RasterImage gaussian_blur(const RasterImage& img, double sigma);

struct BlurOptions {
  double sigma = 8.0;
  // Box-blur radius applied to the mask before compositing; 0 = hard edges.
  // Feathering only extends outward, foreground pixels are never altered.
  std::size_t feather = 0;
};

/// Keeps foreground pixels and replaces background pixels with their
/// blurred values. Throws ImageError if dimensions differ.
RasterImage blur_background(const RasterImage& frame, const BinaryMask& mask, const BlurOptions& opts = {});

// Binary PGM (P5) and PPM (P6) with maxval 255.
RasterImage read_pnm(const std::filesystem::path& path);
void write_pnm(const RasterImage& img, const std::filesystem::path& path);
RasterImage parse_pnm(const std::string& bytes);
std::string format_pnm(const RasterImage& img);

}  // namespace posewire
