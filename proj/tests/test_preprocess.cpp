#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "posewire/preprocess.hpp"
#include "support.hpp"

using namespace posewire;

namespace {

RasterImage random_image(std::mt19937& rng, std::size_t w, std::size_t h, std::size_t ch) {
  RasterImage img(w, h, ch);
  std::uniform_int_distribution<int> d(0, 255);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(d(rng));
  return img;
}

}  // namespace

TEST(ThresholdMask, Boundaries) {
  EXPECT_EQ(threshold_mask(RasterImage(4, 3, 1, 255)).bits, std::vector<bool>(12, true));
  EXPECT_EQ(threshold_mask(RasterImage(4, 3, 1, 0)).bits, std::vector<bool>(12, false));
  RasterImage g(2, 1, 1);
  g.at(0, 0) = 127;
  g.at(1, 0) = 128;
  const BinaryMask m = threshold_mask(g);
  EXPECT_FALSE(m.at(0, 0));
  EXPECT_TRUE(m.at(1, 0));
  EXPECT_THROW(threshold_mask(RasterImage(2, 2, 3)), ImageError);
}

TEST(GaussianKernel, SigmaOneMatchesDensityRatios) {
  const auto taps = gaussian_kernel(1.0);
  ASSERT_EQ(taps.size(), 7u);
  double sum = 0;
  for (int d = -3; d <= 3; ++d) sum += std::exp(-d * d / 2.0);
  for (int d = -3; d <= 3; ++d) EXPECT_NEAR(taps[d + 3], std::exp(-d * d / 2.0) / sum, 1e-15);
  EXPECT_EQ(gaussian_kernel(0.5).size(), 5u);   // ceil(1.5) = 2
  EXPECT_EQ(gaussian_kernel(8.0).size(), 49u);  // radius 24
}

TEST(GaussianBlur, RejectsNonPositiveSigma) {
  EXPECT_THROW(gaussian_blur(RasterImage(3, 3, 1), 0.0), std::invalid_argument);
  EXPECT_THROW(gaussian_blur(RasterImage(3, 3, 1), -1.0), std::invalid_argument);
}

TEST(GaussianBlur, ConstantImageUnchanged) {
  for (const std::uint8_t v : {0, 1, 77, 128, 254, 255}) {
    const RasterImage img(17, 9, 3, v);
    for (const double sigma : {0.3, 1.0, 2.5, 8.0}) EXPECT_EQ(gaussian_blur(img, sigma), img);
  }
}

TEST(GaussianBlur, SeparableMatchesDirectConvolution) {
  RasterImage img(31, 31, 1, 0);
  img.at(15, 15) = 255;
  for (const double sigma : {1.0, 2.0, 3.0}) {
    const RasterImage out = gaussian_blur(img, sigma);
    const auto direct = posewire::testing::direct_gaussian_2d(img.pixels, 31, 31, sigma);
    for (std::size_t i = 0; i < direct.size(); ++i) {
      ASSERT_LE(std::abs(int(out.pixels[i]) - direct[i]), 1) << "sigma " << sigma << " pixel " << i;
    }
  }

  std::mt19937 rng(1);
  const RasterImage noisy = random_image(rng, 23, 19, 1);
  const RasterImage out = gaussian_blur(noisy, 1.5);
  const auto direct = posewire::testing::direct_gaussian_2d(noisy.pixels, 23, 19, 1.5);
  for (std::size_t i = 0; i < direct.size(); ++i) ASSERT_LE(std::abs(int(out.pixels[i]) - direct[i]), 1);
}

TEST(GaussianBlur, StaysWithinInputRange) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    RasterImage img = random_image(rng, 20, 15, 3);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(60 + p % 90);
    const RasterImage out = gaussian_blur(img, 2.0);
    EXPECT_EQ(out.width, img.width);
    EXPECT_EQ(out.height, img.height);
    EXPECT_EQ(out.channels, img.channels);
    for (std::size_t c = 0; c < 3; ++c) {
      int lo = 255, hi = 0;
      for (std::size_t i = c; i < img.pixels.size(); i += 3) {
        lo = std::min<int>(lo, img.pixels[i]);
        hi = std::max<int>(hi, img.pixels[i]);
      }
      for (std::size_t i = c; i < out.pixels.size(); i += 3) {
        EXPECT_GE(out.pixels[i], lo);
        EXPECT_LE(out.pixels[i], hi);
      }
    }
  }
}

TEST(GaussianBlur, ChannelsAreIndependent) {
  RasterImage img(9, 9, 3, 0);
  for (std::size_t y = 0; y < 9; ++y)
    for (std::size_t x = 0; x < 9; ++x) img.at(x, y, 1) = 200;
  const RasterImage out = gaussian_blur(img, 1.0);
  for (std::size_t y = 0; y < 9; ++y) {
    for (std::size_t x = 0; x < 9; ++x) {
      EXPECT_EQ(out.at(x, y, 0), 0);
      EXPECT_EQ(out.at(x, y, 1), 200);
      EXPECT_EQ(out.at(x, y, 2), 0);
    }
  }
}

TEST(BlurBackground, FullMasks) {
  std::mt19937 rng(3);
  const RasterImage frame = random_image(rng, 24, 16, 3);
  EXPECT_EQ(blur_background(frame, BinaryMask(24, 16, true), {4.0, 0}), frame);
  EXPECT_EQ(blur_background(frame, BinaryMask(24, 16, false), {4.0, 0}), gaussian_blur(frame, 4.0));
}

TEST(BlurBackground, VerticalSplit) {
  std::mt19937 rng(4);
  const RasterImage frame = random_image(rng, 30, 20, 3);
  BinaryMask mask(30, 20);
  for (std::size_t y = 0; y < 20; ++y)
    for (std::size_t x = 0; x < 15; ++x) mask.set(x, y, true);
  const RasterImage out = blur_background(frame, mask, {3.0, 0});
  const RasterImage blurred = gaussian_blur(frame, 3.0);
  for (std::size_t y = 0; y < 20; ++y) {
    for (std::size_t x = 0; x < 30; ++x) {
      for (std::size_t c = 0; c < 3; ++c) {
        EXPECT_EQ(out.at(x, y, c), x < 15 ? frame.at(x, y, c) : blurred.at(x, y, c));
      }
    }
  }
}

TEST(BlurBackground, FeatherKeepsForegroundAndBlendsOutward) {
  std::mt19937 rng(5);
  const RasterImage frame = random_image(rng, 30, 20, 3);
  BinaryMask mask(30, 20);
  for (std::size_t y = 5; y < 15; ++y)
    for (std::size_t x = 10; x < 20; ++x) mask.set(x, y, true);
  const RasterImage out = blur_background(frame, mask, {3.0, 2});
  const RasterImage blurred = gaussian_blur(frame, 3.0);
  for (std::size_t y = 0; y < 20; ++y) {
    for (std::size_t x = 0; x < 30; ++x) {
      for (std::size_t c = 0; c < 3; ++c) {
        if (mask.at(x, y)) {
          EXPECT_EQ(out.at(x, y, c), frame.at(x, y, c));
        } else if (x < 7 || x > 22 || y < 2 || y > 17) {
          EXPECT_EQ(out.at(x, y, c), blurred.at(x, y, c));  // beyond the feather radius
        } else {
          const int lo = std::min(frame.at(x, y, c), blurred.at(x, y, c));
          const int hi = std::max(frame.at(x, y, c), blurred.at(x, y, c));
          EXPECT_GE(out.at(x, y, c), lo);
          EXPECT_LE(out.at(x, y, c), hi);
        }
      }
    }
  }
}

TEST(BlurBackground, DimensionMismatch) {
  EXPECT_THROW(blur_background(RasterImage(4, 4, 3), BinaryMask(4, 5)), ImageError);
}

TEST(Pnm, RoundTripAndComments) {
  std::mt19937 rng(6);
  for (const std::size_t ch : {1u, 3u}) {
    const RasterImage img = random_image(rng, 7, 5, ch);
    EXPECT_EQ(parse_pnm(format_pnm(img)), img);
  }
  const std::string with_comment = std::string("P5\n# made by hand\n2 1\n255\n") + char(10) + char(200);
  const RasterImage g = parse_pnm(with_comment);
  EXPECT_EQ(g.width, 2u);
  EXPECT_EQ(g.at(0, 0), 10);
  EXPECT_EQ(g.at(1, 0), 200);
}

TEST(Pnm, Errors) {
  EXPECT_THROW(parse_pnm("P3\n1 1\n255\n0 0 0"), ImageError);
  EXPECT_THROW(parse_pnm("P5\n2 2\n255\nab"), ImageError);
  EXPECT_THROW(parse_pnm("P5\n2 2\n65535\n"), ImageError);
  EXPECT_THROW(parse_pnm("P6\nx 2\n255\n"), ImageError);
  EXPECT_THROW(read_pnm("/nonexistent/frame.ppm"), ImageError);
}

TEST(Pnm, FileRoundTrip) {
  posewire::testing::TempDir dir;
  std::mt19937 rng(7);
  const RasterImage img = random_image(rng, 12, 4, 3);
  write_pnm(img, dir / "000001.ppm");
  EXPECT_EQ(read_pnm(dir / "000001.ppm"), img);
}
