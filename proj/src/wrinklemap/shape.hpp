#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace wrinklemap {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Ordered landmark coordinates in pixels. Face shapes carry exactly
/// kLandmarkCount points: kInnerLandmarkCount inner points followed by the
/// contour (see docs/landmark_order.md).
using Shape = std::vector<Point2>;

inline constexpr std::size_t kLandmarkCount = 88;
inline constexpr std::size_t kInnerLandmarkCount = 64;

struct SimilarityTransform {
  double scale = 1.0;
  double rotation = 0.0;  // radians; p -> scale * [[cos, -sin], [sin, cos]] p + t
  double tx = 0.0;
  double ty = 0.0;

  Point2 apply(Point2 p) const noexcept;
  Shape apply(std::span<const Point2> shape) const;
  SimilarityTransform inverse() const;
};

struct Alignment {
  Shape aligned;
  SimilarityTransform transform;
};

struct MeanShapeOptions {
  Point2 centroid{0.0, 0.0};
  double size = 1.0;  // root-mean-square distance of the points from the centroid
  double tolerance = 1e-6;
  int max_iterations = 100;
};

/// Sum of squared point distances. Throws on count mismatch.
double procrustes_distance(std::span<const Point2> shape, std::span<const Point2> mean);

/// Least-squares similarity (no reflection) taking `shape` onto `mean`.
Alignment align_to_mean(std::span<const Point2> shape, std::span<const Point2> mean);

/// Generalized Procrustes mean, expressed in the frame given by `options`.
Shape mean_shape(std::span<const Shape> shapes, const MeanShapeOptions& options = {});

Point2 centroid(std::span<const Point2> shape);
double rms_size(std::span<const Point2> shape);

/// Translates and scales a shape to the given centroid and RMS size.
Shape canonicalize(std::span<const Point2> shape, Point2 center, double size);

/// Checks count == kLandmarkCount, finite coordinates and, when width/height
/// are positive, that every point lies inside [0, width-1] x [0, height-1].
void validate_landmarks(std::span<const Point2> shape, int width = 0, int height = 0);

/// JSON array of [x, y] pairs.
Shape load_landmarks(const std::filesystem::path& path);
void save_landmarks(const std::filesystem::path& path, std::span<const Point2> shape);

}  // namespace wrinklemap
