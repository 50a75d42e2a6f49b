#include "wrinklemap/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wrinklemap/error.hpp"

namespace wrinklemap {

namespace {

// Half-sample symmetric reflection: ... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
int reflect(int i, int n) noexcept {
  const int period = 2 * n;
  int r = i % period;
  if (r < 0) r += period;
  return r < n ? r : period - 1 - r;
}

void check_dimensions(int width, int height) {
  require(width >= 0 && height >= 0, ErrorCode::kInvalidInput,
          "image dimensions must be non-negative");
}

}  // namespace

GrayImage::GrayImage(int width, int height, double fill) : width_(width), height_(height) {
  check_dimensions(width, height);
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dimensions(width, height);
  require(data_.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
          ErrorCode::kInvalidInput, "pixel buffer length does not match width x height");
}

RgbImage::RgbImage(int width, int height) : width_(width), height_(height) {
  check_dimensions(width, height);
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3, 0);
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dimensions(width, height);
  require(data_.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3,
          ErrorCode::kInvalidInput, "RGB buffer length does not match width x height x 3");
}

void FilterParams::validate() const {
  require(std::isfinite(sigma) && sigma >= 0.0, ErrorCode::kInvalidInput,
          "sigma must be a finite non-negative number");
  require(response_threshold >= 0.0 && response_threshold <= 1.0, ErrorCode::kInvalidInput,
          "response threshold must lie in [0, 1]");
}

std::uint8_t quantize_u8(double value) noexcept {
  if (!(value > 0.0)) return 0;
  if (value >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::lround(value));
}

GrayImage to_grayscale(const RgbImage& rgb) {
  require(!rgb.empty(), ErrorCode::kInvalidInput, "cannot convert an empty image to grayscale");
  GrayImage gray(rgb.width(), rgb.height());
  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) {
      const double luma = kLumaRed * rgb.at(x, y, 0) + kLumaGreen * rgb.at(x, y, 1) +
                          kLumaBlue * rgb.at(x, y, 2);
      gray.at(x, y) = static_cast<double>(quantize_u8(luma));
    }
  }
  return gray;
}

std::vector<double> gaussian_kernel(double sigma) {
  require(std::isfinite(sigma) && sigma >= 0.0, ErrorCode::kInvalidInput,
          "sigma must be a finite non-negative number");
  if (sigma == 0.0) return {1.0};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double w = std::exp(-0.5 * (k * k) / (sigma * sigma));
    taps[static_cast<std::size_t>(k + radius)] = w;
    sum += w;
  }
  for (double& w : taps) w /= sum;
  return taps;
}

GrayImage gaussian_smooth(const GrayImage& img, double sigma) {
  const std::vector<double> taps = gaussian_kernel(sigma);
  if (taps.size() == 1 || img.empty()) return img;

  const int radius = static_cast<int>(taps.size() / 2);
  const int w = img.width();
  const int h = img.height();

  GrayImage rows(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += taps[static_cast<std::size_t>(k + radius)] * img.at(reflect(x + k, w), y);
      }
      rows.at(x, y) = acc;
    }
  }

  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += taps[static_cast<std::size_t>(k + radius)] * rows.at(x, reflect(y + k, h));
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

GradientPair directional_gradient(const GrayImage& img) {
  require(img.width() >= 3 && img.height() >= 3, ErrorCode::kInvalidInput,
          "directional gradient needs an image of at least 3x3 pixels, got " +
              std::to_string(img.width()) + "x" + std::to_string(img.height()));
  const int w = img.width();
  const int h = img.height();
  GradientPair g{GrayImage(w, h), GrayImage(w, h)};

  for (int y = 0; y < h; ++y) {
    g.gx.at(0, y) = img.at(1, y) - img.at(0, y);
    for (int x = 1; x < w - 1; ++x) {
      g.gx.at(x, y) = 0.5 * (img.at(x + 1, y) - img.at(x - 1, y));
    }
    g.gx.at(w - 1, y) = img.at(w - 1, y) - img.at(w - 2, y);
  }
  for (int x = 0; x < w; ++x) {
    g.gy.at(x, 0) = img.at(x, 1) - img.at(x, 0);
    for (int y = 1; y < h - 1; ++y) {
      g.gy.at(x, y) = 0.5 * (img.at(x, y + 1) - img.at(x, y - 1));
    }
    g.gy.at(x, h - 1) = img.at(x, h - 1) - img.at(x, h - 2);
  }
  return g;
}

GrayImage rotate90(const GrayImage& img) {
  const int w = img.width();
  const int h = img.height();
  GrayImage out(h, w);
  for (int y = 0; y < w; ++y) {
    for (int x = 0; x < h; ++x) {
      out.at(x, y) = img.at(w - 1 - y, x);
    }
  }
  return out;
}

GrayImage transpose(const GrayImage& img) {
  GrayImage out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      out.at(y, x) = img.at(x, y);
    }
  }
  return out;
}

}  // namespace wrinklemap
