#pragma once

#include <array>
#include <span>
#include <vector>

#include "wrinklemap/image.hpp"
#include "wrinklemap/shape.hpp"

namespace wrinklemap {

struct Triangle {
  std::array<int, 3> v{};  // landmark indices, ordered so signed_area2 > 0

  friend bool operator==(const Triangle&, const Triangle&) = default;
};

/// Bowyer-Watson Delaunay triangulation. Needs at least three non-collinear points.
std::vector<Triangle> delaunay_triangulation(std::span<const Point2> points);

/// Twice the signed area; positive for counter-clockwise order in a y-up frame.
double signed_area2(Point2 a, Point2 b, Point2 c) noexcept;

/// For every output pixel the index of the first triangle (in list order)
/// containing its centre, or -1 outside the mesh. Edge pixels go to the
/// lowest-indexed triangle.
std::vector<int> triangle_index_map(std::span<const Point2> dst,
                                    std::span<const Triangle> triangles, int width, int height);

/// Bilinear sample with clamped coordinates.
double sample_bilinear(const GrayImage& img, double x, double y) noexcept;

/// Warps `img` (with landmarks `src`) onto the geometry `dst` in an
/// out_width x out_height canvas. When `triangles` is empty the destination
/// points are triangulated here; pass a fixed topology to reuse it across
/// subjects. Pixels outside the mesh are 0.
GrayImage piecewise_affine_warp(const GrayImage& img, std::span<const Point2> src,
                                std::span<const Point2> dst, int out_width, int out_height,
                                std::span<const Triangle> triangles = {});

RgbImage piecewise_affine_warp(const RgbImage& img, std::span<const Point2> src,
                               std::span<const Point2> dst, int out_width, int out_height,
                               std::span<const Triangle> triangles = {});

}  // namespace wrinklemap
