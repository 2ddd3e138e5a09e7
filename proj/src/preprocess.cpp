#include "posewire/preprocess.hpp"

#include <algorithm>
#include <cmath>

namespace posewire {

RasterImage::RasterImage(std::size_t w, std::size_t h, std::size_t c, std::uint8_t fill)
    : width(w), height(h), channels(c), pixels(w * h * c, fill) {
  if (c != 1 && c != 3) throw ImageError("images must have 1 or 3 channels");
}

BinaryMask threshold_mask(const RasterImage& gray) {
  if (gray.channels != 1) throw ImageError("mask source must be single-channel");
  BinaryMask mask(gray.width, gray.height);
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) mask.bits[i] = gray.pixels[i] >= 128;
  return mask;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be positive");
  const auto radius = static_cast<long>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (long d = -radius; d <= radius; ++d) {
    const double w = std::exp(-double(d * d) / (2.0 * sigma * sigma));
    taps[static_cast<std::size_t>(d + radius)] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

RasterImage gaussian_blur(const RasterImage& img, double sigma) {
  const std::vector<double> taps = gaussian_kernel(sigma);
  const auto radius = static_cast<long>(taps.size() / 2);
  const auto w = static_cast<long>(img.width);
  const auto h = static_cast<long>(img.height);
  const std::size_t ch = img.channels;

  auto clamp = [](long i, long n) { return std::clamp(i, 0L, n - 1); };

  // Horizontal pass kept in double; rounding happens once at the end.
  std::vector<double> tmp(img.pixels.size());
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      for (std::size_t c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (long d = -radius; d <= radius; ++d) {
          acc += taps[static_cast<std::size_t>(d + radius)] *
                 img.pixels[(static_cast<std::size_t>(y * w + clamp(x + d, w))) * ch + c];
        }
        tmp[static_cast<std::size_t>(y * w + x) * ch + c] = acc;
      }
    }
  }

  RasterImage out(img.width, img.height, ch);
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      for (std::size_t c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (long d = -radius; d <= radius; ++d) {
          acc += taps[static_cast<std::size_t>(d + radius)] *
                 tmp[static_cast<std::size_t>(clamp(y + d, h) * w + x) * ch + c];
        }
        out.pixels[static_cast<std::size_t>(y * w + x) * ch + c] =
            static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
      }
    }
  }
  return out;
}

namespace {

// Foreground weight per pixel: 1 inside the mask, otherwise the box-filtered
// mask coverage within `radius`.
std::vector<double> feathered_alpha(const BinaryMask& mask, std::size_t radius) {
  const auto w = static_cast<long>(mask.width);
  const auto h = static_cast<long>(mask.height);
  const auto r = static_cast<long>(radius);
  std::vector<double> alpha(mask.bits.size());
  const double area = double(2 * r + 1) * double(2 * r + 1);
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      const auto idx = static_cast<std::size_t>(y * w + x);
      if (mask.bits[idx]) {
        alpha[idx] = 1.0;
        continue;
      }
      long covered = 0;
      for (long dy = -r; dy <= r; ++dy) {
        const long yy = std::clamp(y + dy, 0L, h - 1);
        for (long dx = -r; dx <= r; ++dx) {
          covered += mask.bits[static_cast<std::size_t>(yy * w + std::clamp(x + dx, 0L, w - 1))];
        }
      }
      alpha[idx] = double(covered) / area;
    }
  }
  return alpha;
}

}  // namespace

RasterImage blur_background(const RasterImage& frame, const BinaryMask& mask, const BlurOptions& opts) {
  if (frame.width != mask.width || frame.height != mask.height) {
    throw ImageError("mask is " + std::to_string(mask.width) + "x" + std::to_string(mask.height) +
                     " but frame is " + std::to_string(frame.width) + "x" + std::to_string(frame.height));
  }
  const RasterImage blurred = gaussian_blur(frame, opts.sigma);
  RasterImage out = blurred;
  const std::size_t ch = frame.channels;

  if (opts.feather == 0) {
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
      if (!mask.bits[i]) continue;
      for (std::size_t c = 0; c < ch; ++c) out.pixels[i * ch + c] = frame.pixels[i * ch + c];
    }
    return out;
  }

  const std::vector<double> alpha = feathered_alpha(mask, opts.feather);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (std::size_t c = 0; c < ch; ++c) {
      const double sharp = frame.pixels[i * ch + c];
      const double soft = blurred.pixels[i * ch + c];
      out.pixels[i * ch + c] = static_cast<std::uint8_t>(std::lround(alpha[i] * sharp + (1.0 - alpha[i]) * soft));
    }
  }
  return out;
}

}  // namespace posewire
