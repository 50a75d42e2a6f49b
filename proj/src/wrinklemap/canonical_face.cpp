// Geometry of the shipped face mask. The landmark layout is documented in
// docs/landmark_order.md; region outlines are hand-placed polygons relative
// to those landmarks on a 256x320 canvas.

#include <cmath>
#include <numbers>
#include <vector>

#include "wrinklemap/regions.hpp"

namespace wrinklemap {

namespace {

constexpr double kCenterX = 128.0;

// Face outline (also the outer hull of the warp mesh).
constexpr double kOvalCenterY = 168.0;
constexpr double kOvalHalfWidth = 104.0;
constexpr double kOvalHalfHeight = 146.0;
// Regions stay this far inside the outline.
constexpr double kOvalInset = 8.0;

struct Ellipse {
  double cx, cy, rx, ry;

  Point2 at(double theta) const { return {cx + rx * std::cos(theta), cy + ry * std::sin(theta)}; }
  bool contains(Point2 p, double grow = 0.0) const {
    const double u = (p.x - cx) / (rx + grow);
    const double v = (p.y - cy) / (ry + grow);
    return u * u + v * v <= 1.0;
  }
};

constexpr Ellipse kLeftEye{87.0, 126.0, 19.0, 7.0};
constexpr Ellipse kMouthOuter{128.0, 246.0, 34.0, 13.0};
constexpr Ellipse kMouthInner{128.0, 246.0, 22.0, 4.0};
constexpr Ellipse kOutline{kCenterX, kOvalCenterY, kOvalHalfWidth, kOvalHalfHeight};

Ellipse mirrored(const Ellipse& e) { return {2.0 * kCenterX - e.cx, e.cy, e.rx, e.ry}; }
Point2 mirrored(Point2 p) { return {2.0 * kCenterX - p.x, p.y}; }

using Polygon = std::vector<Point2>;

Polygon mirrored(const Polygon& poly) {
  Polygon out;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) out.push_back(mirrored(*it));
  return out;
}

Polygon rect(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

bool inside(const Polygon& poly, Point2 p) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2 a = poly[i];
    const Point2 b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
      in = !in;
    }
  }
  return in;
}

// Brow arch sampled at t in [0, 1] from the outer to the inner end.
Point2 left_brow(double t) {
  return {62.0 + 50.0 * t, 98.0 - 10.0 * std::sin(std::numbers::pi * (0.35 + 0.65 * t))};
}

double distance_to_brow(Point2 p) {
  double best = 1e9;
  for (int i = 0; i <= 100; ++i) {
    const Point2 b = left_brow(i / 100.0);
    best = std::min(best, std::hypot(p.x - b.x, p.y - b.y));
  }
  return best;
}

// Deterministic sub-pixel jitter that breaks the exact mirror symmetry, so no
// four landmarks are cocircular when the mesh is triangulated.
Point2 jitter(Point2 p, std::size_t index) {
  const double k = static_cast<double>(index);
  return {p.x + 0.05 * std::sin(12.9898 * k + 1.0), p.y + 0.05 * std::cos(78.233 * k + 2.0)};
}

}  // namespace

Shape canonical_landmarks() {
  Shape s;
  s.reserve(kLandmarkCount);
  const double pi = std::numbers::pi;

  for (int i = 0; i < 8; ++i) s.push_back(left_brow(i / 7.0));                // 0-7
  for (int i = 0; i < 8; ++i) s.push_back(mirrored(left_brow(i / 7.0)));      // 8-15
  for (int i = 0; i < 10; ++i) s.push_back(kLeftEye.at(pi + 2.0 * pi * i / 10.0));  // 16-25
  const Ellipse right_eye = mirrored(kLeftEye);
  for (int i = 0; i < 10; ++i) s.push_back(right_eye.at(-2.0 * pi * i / 10.0));     // 26-35

  // 36-45: nose root down the bridge to the tip, then wings and base.
  const Point2 nose[] = {{128.0, 112.0}, {128.0, 131.0}, {128.0, 150.0}, {128.0, 168.0},
                         {128.0, 183.0}, {113.0, 184.0}, {143.0, 184.0}, {117.0, 194.0},
                         {139.0, 194.0}, {128.0, 197.0}};
  for (const Point2& p : nose) s.push_back(p);

  for (int i = 0; i < 12; ++i) s.push_back(kMouthOuter.at(pi + 2.0 * pi * i / 12.0));  // 46-57
  for (int i = 0; i < 6; ++i) s.push_back(kMouthInner.at(pi + 2.0 * pi * i / 6.0));    // 58-63

  // 64-87: outline clockwise on screen from the top of the forehead.
  for (int i = 0; i < 24; ++i) s.push_back(kOutline.at(-pi / 2.0 + 2.0 * pi * i / 24.0));

  for (std::size_t i = 0; i < s.size(); ++i) s[i] = jitter(s[i], i);
  return s;
}

RegionMap build_canonical_region_map() {
  const Ellipse inset{kCenterX, kOvalCenterY, kOvalHalfWidth - kOvalInset,
                      kOvalHalfHeight - kOvalInset};
  const Ellipse right_eye = mirrored(kLeftEye);
  const Polygon nose = {{120, 122}, {136, 122}, {146, 182}, {143, 199},
                        {113, 199}, {110, 182}};

  auto excluded = [&](Point2 p) {
    const Point2 folded = p.x > kCenterX ? mirrored(p) : p;
    return kLeftEye.contains(p, 3.0) || right_eye.contains(p, 3.0) ||
           kMouthOuter.contains(p, 2.0) || inside(nose, p) || distance_to_brow(folded) < 5.0;
  };

  // Left-side outlines; right side mirrored. Earlier entries win overlaps.
  const Polygon nasolabial = {{99, 183}, {113, 186}, {93, 241}, {79, 238}};
  const Polygon marionette = {{84, 254}, {100, 260}, {102, 286}, {90, 284}};
  const Polygon cheek = {{44, 152}, {104, 152}, {99, 183}, {79, 238}, {60, 236}, {44, 200}};
  struct Zone {
    int label;
    Polygon outline;
  };
  std::vector<Zone> zones = {
      {2, rect(116, 84, 140, 122)},
      {3, rect(68, 104, 106, 116)},
      {5, rect(68, 135, 106, 150)},
      {4, rect(40, 108, 67, 148)},
      {7, nasolabial},
      {8, rect(104, 203, 152, 230)},
      {10, rect(106, 264, 150, 290)},
      {9, marionette},
      {6, cheek},
      {1, rect(40, 34, 216, 82)},
  };
  const std::size_t left_side = zones.size();
  for (std::size_t i = 0; i < left_side; ++i) {
    if (zones[i].label == 2 || zones[i].label == 8 || zones[i].label == 10 ||
        zones[i].label == 1) {
      continue;  // already span the midline
    }
    zones.push_back({zones[i].label, mirrored(zones[i].outline)});
  }
  // Re-establish priority order after appending mirrored outlines.
  const int priority[] = {2, 3, 5, 4, 7, 8, 10, 9, 6, 1};

  std::vector<std::uint8_t> labels(static_cast<std::size_t>(kCanonicalWidth) * kCanonicalHeight, 0);
  for (int y = 0; y < kCanonicalHeight; ++y) {
    for (int x = 0; x < kCanonicalWidth; ++x) {
      const Point2 p{static_cast<double>(x), static_cast<double>(y)};
      if (!inset.contains(p) || excluded(p)) continue;
      int assigned = 0;
      for (int label : priority) {
        for (const Zone& z : zones) {
          if (z.label == label && inside(z.outline, p)) {
            assigned = label;
            break;
          }
        }
        if (assigned != 0) break;
      }
      labels[static_cast<std::size_t>(y) * kCanonicalWidth + x] = static_cast<std::uint8_t>(assigned);
    }
  }
  return RegionMap(kCanonicalWidth, kCanonicalHeight, std::move(labels), canonical_landmarks());
}

}  // namespace wrinklemap
