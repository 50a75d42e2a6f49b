#pragma once

#include "wrinklemap/image.hpp"

namespace wrinklemap {

/// Per-pixel symmetric 2x2 Hessian laid out as [[ha, hb], [hb, hc]] with
/// ha = d2/dy2, hb = d2/dxdy, hc = d2/dx2.
struct HessianField {
  GrayImage ha;
  GrayImage hb;
  GrayImage hc;

  int width() const noexcept { return ha.width(); }
  int height() const noexcept { return ha.height(); }
};

enum class Orientation { kHorizontal, kVertical };

/// Ridge response in [0, 1]. A nonzero map peaks at exactly 1.
class WrinkleMap {
 public:
  WrinkleMap() = default;
  /// Takes a response image already scaled to [0, 1]; out-of-range values are rejected.
  explicit WrinkleMap(GrayImage response);

  int width() const noexcept { return response_.width(); }
  int height() const noexcept { return response_.height(); }
  double at(int x, int y) const { return response_.at(x, y); }
  const GrayImage& image() const noexcept { return response_; }

  /// 8-bit export view: round(255 * response).
  GrayImage to_intensity() const;
  static WrinkleMap from_intensity(const GrayImage& intensity);

 private:
  GrayImage response_;
};

struct Eigen2 {
  double value = 0.0;
  // Unit eigenvector in the matrix basis (first component pairs with ha).
  double u = 1.0;
  double v = 0.0;
};

/// Responses whose peak falls below this are treated as empty.
inline constexpr double kResponseFloor = 1e-9;

HessianField hessian_field(const GrayImage& img, double sigma);

/// Eigenvalue of largest magnitude of [[ha, hb], [hb, hc]]; on a magnitude tie
/// the algebraically larger one.
Eigen2 max_eigen(double ha, double hb, double hc) noexcept;

/// Positive max-eigenvalue response before normalization.
GrayImage raw_hhf_response(const GrayImage& img, Orientation orientation, double sigma);

WrinkleMap hhf_response(const GrayImage& img, Orientation orientation, const FilterParams& params);

/// Pixel-wise maximum of both orientations, renormalized to peak 1.
WrinkleMap combined_wrinkle_map(const GrayImage& img, const FilterParams& params);

/// Scales a non-negative response so its maximum is 1 (all-zero stays zero).
WrinkleMap normalize_response(const GrayImage& raw);

}  // namespace wrinklemap
