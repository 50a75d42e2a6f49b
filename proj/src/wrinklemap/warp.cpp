#include "wrinklemap/warp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "wrinklemap/error.hpp"

namespace wrinklemap {

namespace {

// Barycentric slack for pixels on triangle edges.
constexpr double kInsideTolerance = 1e-9;
// Source coordinates this close to an integer are snapped onto it.
constexpr double kSnapTolerance = 1e-9;

bool in_circumcircle(Point2 a, Point2 b, Point2 c, Point2 p) noexcept {
  const double ax = a.x - p.x, ay = a.y - p.y;
  const double bx = b.x - p.x, by = b.y - p.y;
  const double cx = c.x - p.x, cy = c.y - p.y;
  const double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                     (bx * bx + by * by) * (ax * cy - cx * ay) +
                     (cx * cx + cy * cy) * (ax * by - bx * ay);
  // The determinant is positive inside for counter-clockwise (a, b, c).
  return signed_area2(a, b, c) > 0.0 ? det > 0.0 : det < 0.0;
}

Triangle oriented(int a, int b, int c, std::span<const Point2> pts) {
  if (signed_area2(pts[a], pts[b], pts[c]) < 0.0) std::swap(b, c);
  return Triangle{{a, b, c}};
}

// Affine map taking destination coordinates to source coordinates for one triangle.
struct AffineMap {
  double a = 0, b = 0, c = 0;  // src.x = a*x + b*y + c
  double d = 0, e = 0, f = 0;  // src.y = d*x + e*y + f

  Point2 operator()(double x, double y) const noexcept {
    return {a * x + b * y + c, d * x + e * y + f};
  }
};

AffineMap solve_affine(Point2 d0, Point2 d1, Point2 d2, Point2 s0, Point2 s1, Point2 s2) {
  const double det = signed_area2(d0, d1, d2);
  // Cramer's rule on [x y 1] rows.
  auto solve = [&](double r0, double r1, double r2, double& p, double& q, double& r) {
    p = (r0 * (d1.y - d2.y) + r1 * (d2.y - d0.y) + r2 * (d0.y - d1.y)) / det;
    q = (r0 * (d2.x - d1.x) + r1 * (d0.x - d2.x) + r2 * (d1.x - d0.x)) / det;
    r = (r0 * (d1.x * d2.y - d2.x * d1.y) + r1 * (d2.x * d0.y - d0.x * d2.y) +
         r2 * (d0.x * d1.y - d1.x * d0.y)) / det;
  };
  AffineMap m;
  solve(s0.x, s1.x, s2.x, m.a, m.b, m.c);
  solve(s0.y, s1.y, s2.y, m.d, m.e, m.f);
  return m;
}

double snap(double v) noexcept {
  const double r = std::round(v);
  return std::abs(v - r) < kSnapTolerance ? r : v;
}

void check_warp_inputs(std::span<const Point2> src, std::span<const Point2> dst, int out_width,
                       int out_height) {
  require(src.size() == dst.size(), ErrorCode::kInvalidInput,
          "source and destination landmark counts differ");
  require(out_width > 0 && out_height > 0, ErrorCode::kInvalidInput,
          "warp output size must be positive");
  for (std::size_t i = 0; i < dst.size(); ++i) {
    require(dst[i].x >= 0.0 && dst[i].y >= 0.0 && dst[i].x <= out_width - 1 &&
                dst[i].y <= out_height - 1,
            ErrorCode::kInvalidInput,
            "destination landmark " + std::to_string(i) + " lies outside the output canvas");
  }
}

std::vector<AffineMap> triangle_maps(std::span<const Point2> src, std::span<const Point2> dst,
                                     std::span<const Triangle> triangles) {
  std::vector<AffineMap> maps;
  maps.reserve(triangles.size());
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& v = triangles[t].v;
    for (int k : v) {
      require(k >= 0 && static_cast<std::size_t>(k) < dst.size(), ErrorCode::kInvalidInput,
              "triangle " + std::to_string(t) + " references a missing landmark");
    }
    const double area2 = signed_area2(dst[v[0]], dst[v[1]], dst[v[2]]);
    if (std::abs(area2) < 1e-9) {
      fail(ErrorCode::kDegenerateGeometry,
           "destination triangle " + std::to_string(t) + " (landmarks " + std::to_string(v[0]) +
               ", " + std::to_string(v[1]) + ", " + std::to_string(v[2]) + ") has zero area");
    }
    maps.push_back(solve_affine(dst[v[0]], dst[v[1]], dst[v[2]], src[v[0]], src[v[1]], src[v[2]]));
  }
  return maps;
}

template <typename Sampler>
void warp_pixels(std::span<const Point2> src, std::span<const Point2> dst, int out_width,
                 int out_height, std::span<const Triangle> triangles, Sampler&& write_pixel) {
  check_warp_inputs(src, dst, out_width, out_height);
  std::vector<Triangle> own;
  if (triangles.empty()) {
    own = delaunay_triangulation(dst);
    triangles = own;
  }
  const std::vector<AffineMap> maps = triangle_maps(src, dst, triangles);
  const std::vector<int> owner = triangle_index_map(dst, triangles, out_width, out_height);
  for (int y = 0; y < out_height; ++y) {
    for (int x = 0; x < out_width; ++x) {
      const int t = owner[static_cast<std::size_t>(y) * out_width + x];
      if (t < 0) continue;
      const Point2 s = maps[static_cast<std::size_t>(t)](x, y);
      write_pixel(x, y, snap(s.x), snap(s.y));
    }
  }
}

}  // namespace

double signed_area2(Point2 a, Point2 b, Point2 c) noexcept {
  return (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
}

std::vector<Triangle> delaunay_triangulation(std::span<const Point2> points) {
  require(points.size() >= 3, ErrorCode::kInvalidInput,
          "triangulation needs at least three points");
  const int n = static_cast<int>(points.size());

  double min_x = points[0].x, max_x = points[0].x, min_y = points[0].y, max_y = points[0].y;
  for (const Point2& p : points) {
    require(std::isfinite(p.x) && std::isfinite(p.y), ErrorCode::kInvalidInput,
            "triangulation points must be finite");
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1.0});
  const double cx = 0.5 * (min_x + max_x);
  const double cy = 0.5 * (min_y + max_y);

  // Working point list: the input followed by a super triangle enclosing everything.
  std::vector<Point2> pts(points.begin(), points.end());
  pts.push_back({cx - 50.0 * span, cy - 40.0 * span});
  pts.push_back({cx + 50.0 * span, cy - 40.0 * span});
  pts.push_back({cx, cy + 60.0 * span});

  std::vector<Triangle> mesh{oriented(n, n + 1, n + 2, pts)};
  for (int i = 0; i < n; ++i) {
    const Point2 p = pts[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) {
      require(!(pts[static_cast<std::size_t>(j)] == p), ErrorCode::kDegenerateGeometry,
              "duplicate landmark positions " + std::to_string(j) + " and " + std::to_string(i));
    }

    std::vector<Triangle> kept;
    std::map<std::pair<int, int>, int> edge_count;
    std::vector<std::pair<int, int>> edges;
    for (const Triangle& t : mesh) {
      if (in_circumcircle(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]], p)) {
        for (int k = 0; k < 3; ++k) {
          const int a = t.v[k];
          const int b = t.v[(k + 1) % 3];
          edges.emplace_back(a, b);
          ++edge_count[{std::min(a, b), std::max(a, b)}];
        }
      } else {
        kept.push_back(t);
      }
    }
    for (const auto& [a, b] : edges) {
      if (edge_count[{std::min(a, b), std::max(a, b)}] == 1) kept.push_back(oriented(a, b, i, pts));
    }
    mesh = std::move(kept);
  }

  std::vector<Triangle> result;
  for (const Triangle& t : mesh) {
    if (t.v[0] < n && t.v[1] < n && t.v[2] < n) result.push_back(t);
  }
  require(!result.empty(), ErrorCode::kDegenerateGeometry,
          "points are collinear; no triangle can be formed");
  // Deterministic order independent of insertion history.
  for (Triangle& t : result) {
    std::rotate(t.v.begin(), std::min_element(t.v.begin(), t.v.end()), t.v.end());
  }
  std::sort(result.begin(), result.end(),
            [](const Triangle& a, const Triangle& b) { return a.v < b.v; });
  return result;
}

std::vector<int> triangle_index_map(std::span<const Point2> dst,
                                    std::span<const Triangle> triangles, int width, int height) {
  std::vector<int> owner(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), -1);
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const Point2 a = dst[triangles[t].v[0]];
    const Point2 b = dst[triangles[t].v[1]];
    const Point2 c = dst[triangles[t].v[2]];
    const double area2 = signed_area2(a, b, c);
    if (area2 == 0.0) continue;

    const int x0 = std::max(0, static_cast<int>(std::floor(std::min({a.x, b.x, c.x}))));
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max({a.x, b.x, c.x}))));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min({a.y, b.y, c.y}))));
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max({a.y, b.y, c.y}))));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        int& slot = owner[static_cast<std::size_t>(y) * width + x];
        if (slot >= 0) continue;
        const Point2 p{static_cast<double>(x), static_cast<double>(y)};
        const double l0 = signed_area2(b, c, p) / area2;
        const double l1 = signed_area2(c, a, p) / area2;
        const double l2 = signed_area2(a, b, p) / area2;
        if (l0 >= -kInsideTolerance && l1 >= -kInsideTolerance && l2 >= -kInsideTolerance) {
          slot = static_cast<int>(t);
        }
      }
    }
  }
  return owner;
}

double sample_bilinear(const GrayImage& img, double x, double y) noexcept {
  const int w = img.width();
  const int h = img.height();
  x = std::clamp(x, 0.0, static_cast<double>(w - 1));
  y = std::clamp(y, 0.0, static_cast<double>(h - 1));
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = img.at(x0, y0) + fx * (img.at(x1, y0) - img.at(x0, y0));
  const double bottom = img.at(x0, y1) + fx * (img.at(x1, y1) - img.at(x0, y1));
  return top + fy * (bottom - top);
}

GrayImage piecewise_affine_warp(const GrayImage& img, std::span<const Point2> src,
                                std::span<const Point2> dst, int out_width, int out_height,
                                std::span<const Triangle> triangles) {
  require(!img.empty(), ErrorCode::kInvalidInput, "cannot warp an empty image");
  GrayImage out(out_width, out_height);
  warp_pixels(src, dst, out_width, out_height, triangles, [&](int x, int y, double sx, double sy) {
    out.at(x, y) = sample_bilinear(img, sx, sy);
  });
  return out;
}

RgbImage piecewise_affine_warp(const RgbImage& img, std::span<const Point2> src,
                               std::span<const Point2> dst, int out_width, int out_height,
                               std::span<const Triangle> triangles) {
  require(!img.empty(), ErrorCode::kInvalidInput, "cannot warp an empty image");
  std::array<GrayImage, 3> planes;
  for (int c = 0; c < 3; ++c) {
    planes[c] = GrayImage(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) planes[c].at(x, y) = img.at(x, y, c);
    }
  }
  RgbImage out(out_width, out_height);
  warp_pixels(src, dst, out_width, out_height, triangles, [&](int x, int y, double sx, double sy) {
    for (int c = 0; c < 3; ++c) out.at(x, y, c) = quantize_u8(sample_bilinear(planes[c], sx, sy));
  });
  return out;
}

}  // namespace wrinklemap
