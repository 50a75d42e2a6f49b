#include "wrinklemap/shape.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "json.hpp"
#include "wrinklemap/error.hpp"

namespace wrinklemap {

Point2 SimilarityTransform::apply(Point2 p) const noexcept {
  const double c = std::cos(rotation);
  const double s = std::sin(rotation);
  return {scale * (c * p.x - s * p.y) + tx, scale * (s * p.x + c * p.y) + ty};
}

Shape SimilarityTransform::apply(std::span<const Point2> shape) const {
  Shape out;
  out.reserve(shape.size());
  for (const Point2& p : shape) out.push_back(apply(p));
  return out;
}

SimilarityTransform SimilarityTransform::inverse() const {
  require(scale > 0.0, ErrorCode::kInvalidInput, "similarity scale must be positive");
  SimilarityTransform inv;
  inv.scale = 1.0 / scale;
  inv.rotation = -rotation;
  const Point2 t = inv.apply(Point2{tx, ty});
  inv.tx = -t.x;
  inv.ty = -t.y;
  return inv;
}

Point2 centroid(std::span<const Point2> shape) {
  require(!shape.empty(), ErrorCode::kInvalidInput, "shape has no points");
  Point2 c;
  for (const Point2& p : shape) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= static_cast<double>(shape.size());
  c.y /= static_cast<double>(shape.size());
  return c;
}

double rms_size(std::span<const Point2> shape) {
  const Point2 c = centroid(shape);
  double sum = 0.0;
  for (const Point2& p : shape) sum += (p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y);
  return std::sqrt(sum / static_cast<double>(shape.size()));
}

Shape canonicalize(std::span<const Point2> shape, Point2 center, double size) {
  const Point2 c = centroid(shape);
  const double current = rms_size(shape);
  require(current > 0.0, ErrorCode::kDegenerateShape, "all shape points coincide");
  const double k = size / current;
  Shape out;
  out.reserve(shape.size());
  for (const Point2& p : shape) out.push_back({center.x + k * (p.x - c.x), center.y + k * (p.y - c.y)});
  return out;
}

double procrustes_distance(std::span<const Point2> shape, std::span<const Point2> mean) {
  require(shape.size() == mean.size(), ErrorCode::kInvalidInput,
          "point count mismatch: " + std::to_string(shape.size()) + " vs " +
              std::to_string(mean.size()));
  double d = 0.0;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const double dx = shape[i].x - mean[i].x;
    const double dy = shape[i].y - mean[i].y;
    d += dx * dx + dy * dy;
  }
  return d;
}

Alignment align_to_mean(std::span<const Point2> shape, std::span<const Point2> mean) {
  require(shape.size() == mean.size(), ErrorCode::kInvalidInput,
          "point count mismatch: " + std::to_string(shape.size()) + " vs " +
              std::to_string(mean.size()));
  require(!shape.empty(), ErrorCode::kInvalidInput, "shape has no points");

  const Point2 cs = centroid(shape);
  const Point2 cm = centroid(mean);
  double dot = 0.0;
  double cross = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const double px = shape[i].x - cs.x;
    const double py = shape[i].y - cs.y;
    const double qx = mean[i].x - cm.x;
    const double qy = mean[i].y - cm.y;
    dot += px * qx + py * qy;
    cross += px * qy - py * qx;
    norm += px * px + py * py;
  }
  require(norm > 0.0, ErrorCode::kDegenerateShape,
          "cannot align a shape whose points all coincide");

  SimilarityTransform t;
  t.rotation = std::atan2(cross, dot);
  t.scale = std::hypot(dot, cross) / norm;
  require(t.scale > 0.0, ErrorCode::kDegenerateShape,
          "shape and mean are orthogonal or the mean is degenerate; no positive scale fits");
  const Point2 moved = SimilarityTransform{t.scale, t.rotation, 0.0, 0.0}.apply(cs);
  t.tx = cm.x - moved.x;
  t.ty = cm.y - moved.y;
  return {t.apply(shape), t};
}

Shape mean_shape(std::span<const Shape> shapes, const MeanShapeOptions& options) {
  require(!shapes.empty(), ErrorCode::kInvalidInput, "mean shape needs at least one shape");
  require(options.size > 0.0, ErrorCode::kInvalidInput, "mean shape size must be positive");
  const std::size_t n = shapes.front().size();
  for (const Shape& s : shapes) {
    require(s.size() == n, ErrorCode::kInvalidInput, "shapes have differing point counts");
  }

  Shape mean = canonicalize(shapes.front(), options.centroid, options.size);
  for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
    Shape sum(n);
    for (const Shape& s : shapes) {
      const Shape aligned = align_to_mean(s, mean).aligned;
      for (std::size_t i = 0; i < n; ++i) {
        sum[i].x += aligned[i].x;
        sum[i].y += aligned[i].y;
      }
    }
    for (Point2& p : sum) {
      p.x /= static_cast<double>(shapes.size());
      p.y /= static_cast<double>(shapes.size());
    }
    // Pin the orientation to the previous estimate, then the centroid and size.
    Shape next = canonicalize(align_to_mean(sum, mean).aligned, options.centroid, options.size);

    double movement = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      movement = std::max(movement, std::hypot(next[i].x - mean[i].x, next[i].y - mean[i].y));
    }
    mean = std::move(next);
    if (movement < options.tolerance) break;
  }
  return mean;
}

void validate_landmarks(std::span<const Point2> shape, int width, int height) {
  require(shape.size() == kLandmarkCount, ErrorCode::kInvalidInput,
          "expected " + std::to_string(kLandmarkCount) + " landmarks, got " +
              std::to_string(shape.size()));
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const Point2& p = shape[i];
    require(std::isfinite(p.x) && std::isfinite(p.y), ErrorCode::kInvalidInput,
            "landmark " + std::to_string(i) + " is not finite");
    if (width > 0 && height > 0) {
      require(p.x >= 0.0 && p.y >= 0.0 && p.x <= width - 1 && p.y <= height - 1,
              ErrorCode::kInvalidInput,
              "landmark " + std::to_string(i) + " lies outside the " + std::to_string(width) +
                  "x" + std::to_string(height) + " image");
    }
  }
}

Shape load_landmarks(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open landmark file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, "landmark file " + path.string() + ": " + e.what());
  }
  require(doc.is_array(), ErrorCode::kParse,
          "landmark file " + path.string() + " must hold a JSON array of [x, y] pairs");
  Shape shape;
  shape.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    require(item.is_array() && item.size() == 2 && item[0].is_number() && item[1].is_number(),
            ErrorCode::kParse,
            "landmark file " + path.string() + ": entry " + std::to_string(i) +
                " is not a two-element numeric array");
    shape.push_back({item[0].get<double>(), item[1].get<double>()});
  }
  validate_landmarks(shape);
  return shape;
}

void save_landmarks(const std::filesystem::path& path, std::span<const Point2> shape) {
  nlohmann::json doc = nlohmann::json::array();
  for (const Point2& p : shape) doc.push_back({p.x, p.y});
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot write landmark file " + path.string());
  out << doc.dump() << '\n';
}

}  // namespace wrinklemap
