#include "wrinklemap/hhf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wrinklemap/error.hpp"

namespace wrinklemap {

namespace {

void require_min_size(const GrayImage& img, int min_side, const char* what) {
  require(img.width() >= min_side && img.height() >= min_side, ErrorCode::kInvalidInput,
          std::string(what) + " needs an image of at least " + std::to_string(min_side) + "x" +
              std::to_string(min_side) + " pixels, got " + std::to_string(img.width()) + "x" +
              std::to_string(img.height()));
}

// Second difference along one axis; the two border samples reuse the stencil
// of their nearest interior neighbour.
double second_difference(double a, double b, double c) noexcept { return a - 2.0 * b + c; }

GrayImage rectified(const GrayImage& channel) {
  GrayImage out = channel;
  for (double& v : out.pixels()) v = std::abs(v);
  return out;
}

}  // namespace

WrinkleMap::WrinkleMap(GrayImage response) : response_(std::move(response)) {
  for (const double v : response_.pixels()) {
    require(v >= 0.0 && v <= 1.0, ErrorCode::kInvalidInput,
            "wrinkle map values must lie in [0, 1]");
  }
}

GrayImage WrinkleMap::to_intensity() const {
  GrayImage out(width(), height());
  auto src = response_.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = quantize_u8(255.0 * src[i]);
  return out;
}

WrinkleMap WrinkleMap::from_intensity(const GrayImage& intensity) {
  GrayImage response(intensity.width(), intensity.height());
  auto src = intensity.pixels();
  auto dst = response.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::clamp(src[i] / 255.0, 0.0, 1.0);
  return WrinkleMap(std::move(response));
}

HessianField hessian_field(const GrayImage& img, double sigma) {
  require_min_size(img, 5, "Hessian field");
  const GrayImage s = gaussian_smooth(img, sigma);
  const int w = s.width();
  const int h = s.height();

  HessianField field{GrayImage(w, h), GrayImage(w, h), GrayImage(w, h)};
  for (int y = 0; y < h; ++y) {
    const int yc = std::clamp(y, 1, h - 2);
    for (int x = 0; x < w; ++x) {
      const int xc = std::clamp(x, 1, w - 2);
      field.hc.at(x, y) = second_difference(s.at(xc - 1, y), s.at(xc, y), s.at(xc + 1, y));
      field.ha.at(x, y) = second_difference(s.at(x, yc - 1), s.at(x, yc), s.at(x, yc + 1));
    }
  }
  // Mixed term as the y-derivative of the x-derivative.
  field.hb = directional_gradient(directional_gradient(s).gx).gy;
  return field;
}

Eigen2 max_eigen(double ha, double hb, double hc) noexcept {
  const double mean = 0.5 * (ha + hc);
  const double half_diff = 0.5 * (ha - hc);
  const double radius = std::hypot(half_diff, hb);
  const double upper = mean + radius;
  const double lower = mean - radius;
  const double lambda = std::abs(upper) >= std::abs(lower) ? upper : lower;

  // Two candidate null vectors of (H - lambda I); keep the better conditioned one.
  double u1 = hb;
  double v1 = lambda - ha;
  double u2 = lambda - hc;
  double v2 = hb;
  const double n1 = std::hypot(u1, v1);
  const double n2 = std::hypot(u2, v2);

  Eigen2 e;
  e.value = lambda;
  const double scale = std::max({std::abs(ha), std::abs(hb), std::abs(hc)});
  if (std::max(n1, n2) <= 1e-12 * scale) {
    return e;  // lambda * I: every direction is an eigenvector
  }
  if (n1 >= n2) {
    e.u = u1 / n1;
    e.v = v1 / n1;
  } else {
    e.u = u2 / n2;
    e.v = v2 / n2;
  }
  if (e.u < 0.0 || (e.u == 0.0 && e.v < 0.0)) {
    e.u = -e.u;
    e.v = -e.v;
  }
  return e;
}

GrayImage raw_hhf_response(const GrayImage& img, Orientation orientation, double sigma) {
  require_min_size(img, 7, "HHF response");
  require(std::isfinite(sigma) && sigma >= 0.0, ErrorCode::kInvalidInput,
          "sigma must be a finite non-negative number");

  const GradientPair gradient = directional_gradient(gaussian_smooth(img, sigma));
  // Gy carries horizontal lines, Gx vertical ones.
  const GrayImage channel =
      rectified(orientation == Orientation::kHorizontal ? gradient.gy : gradient.gx);
  const HessianField field = hessian_field(channel, sigma);

  GrayImage response(img.width(), img.height());
  auto ha = field.ha.pixels();
  auto hb = field.hb.pixels();
  auto hc = field.hc.pixels();
  auto out = response.pixels();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::max(0.0, max_eigen(ha[i], hb[i], hc[i]).value);
  }
  return response;
}

WrinkleMap normalize_response(const GrayImage& raw) {
  double peak = 0.0;
  for (const double v : raw.pixels()) peak = std::max(peak, v);

  GrayImage out(raw.width(), raw.height());
  if (peak < kResponseFloor) return WrinkleMap(std::move(out));
  auto src = raw.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::max(0.0, src[i]) / peak;
  return WrinkleMap(std::move(out));
}

WrinkleMap hhf_response(const GrayImage& img, Orientation orientation, const FilterParams& params) {
  params.validate();
  return normalize_response(raw_hhf_response(img, orientation, params.sigma));
}

WrinkleMap combined_wrinkle_map(const GrayImage& img, const FilterParams& params) {
  params.validate();
  GrayImage horizontal = raw_hhf_response(img, Orientation::kHorizontal, params.sigma);
  const GrayImage vertical = raw_hhf_response(img, Orientation::kVertical, params.sigma);
  auto h = horizontal.pixels();
  auto v = vertical.pixels();
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::max(h[i], v[i]);
  return normalize_response(horizontal);
}

}  // namespace wrinklemap
