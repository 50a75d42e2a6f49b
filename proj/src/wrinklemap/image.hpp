#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wrinklemap {

/// Single-channel real-valued intensity field, row-major.
/// Values are kept on the 0..255 scale of the source data; quantization to
/// 8 bits happens only when writing files.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);
  GrayImage(int width, int height, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& at(int x, int y) { return data_[index(x, y)]; }
  double at(int x, int y) const { return data_[index(x, y)]; }

  std::span<double> pixels() noexcept { return data_; }
  std::span<const double> pixels() const noexcept { return data_; }

  bool same_shape(const GrayImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// 8-bit interleaved RGB image as read from / written to PNG.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height);
  RgbImage(int width, int height, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }

  std::uint8_t& at(int x, int y, int channel) { return data_[index(x, y, channel)]; }
  std::uint8_t at(int x, int y, int channel) const { return data_[index(x, y, channel)]; }

  std::span<const std::uint8_t> bytes() const noexcept { return data_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t index(int x, int y, int channel) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3 + static_cast<std::size_t>(channel);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

struct GradientPair {
  GrayImage gx;  // dI/dx
  GrayImage gy;  // dI/dy
};

struct FilterParams {
  double sigma = 2.0;
  double response_threshold = 0.3;

  void validate() const;
};

// Rec.601 luma weights.
inline constexpr double kLumaRed = 0.299;
inline constexpr double kLumaGreen = 0.587;
inline constexpr double kLumaBlue = 0.114;

GrayImage to_grayscale(const RgbImage& rgb);

/// Separable Gaussian blur with kernel radius ceil(3 sigma) and mirrored
/// borders. sigma == 0 returns the input unchanged.
GrayImage gaussian_smooth(const GrayImage& img, double sigma);

/// Normalized 1-D Gaussian taps for offsets -radius..radius.
std::vector<double> gaussian_kernel(double sigma);

/// Central differences inside, one-sided differences on the border.
GradientPair directional_gradient(const GrayImage& img);

/// Rounds to the nearest 8-bit level, clamping to [0, 255].
std::uint8_t quantize_u8(double value) noexcept;

/// Counter-clockwise quarter turn: output(x', y') = input(W-1-y', x').
GrayImage rotate90(const GrayImage& img);
GrayImage transpose(const GrayImage& img);

}  // namespace wrinklemap
