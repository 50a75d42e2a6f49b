#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wrinklemap/hhf.hpp"
#include "wrinklemap/shape.hpp"
#include "wrinklemap/warp.hpp"

namespace wrinklemap {

inline constexpr int kRegionCount = 10;

/// Densities are reported as 10^4 x (wrinkle pixels / mask pixels).
inline constexpr double kDensityScale = 1e4;

/// Names for labels 1..10; label 0 is "outside".
std::string_view region_name(int region_id);

/// Canonical face mask: one label per pixel (0 outside, 1..10 regions) plus
/// the mean landmark shape registered to it.
class RegionMap {
 public:
  /// Validates labels (all of 1..10 present, nothing above 10) and landmarks.
  RegionMap(int width, int height, std::vector<std::uint8_t> labels, Shape canonical_landmarks);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int label(int x, int y) const { return labels_[static_cast<std::size_t>(y) * width_ + x]; }
  const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }
  const Shape& canonical_landmarks() const noexcept { return landmarks_; }
  /// Delaunay triangulation of the canonical landmarks, shared by every subject warp.
  const std::vector<Triangle>& triangles() const noexcept { return triangles_; }

  std::size_t mask_area() const noexcept { return mask_area_; }
  std::size_t region_area(int region_id) const;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> labels_;
  Shape landmarks_;
  std::vector<Triangle> triangles_;
  std::array<std::size_t, kRegionCount + 1> areas_{};
  std::size_t mask_area_ = 0;
};

inline constexpr int kCanonicalWidth = 256;
inline constexpr int kCanonicalHeight = 320;

/// The repository's 88-point canonical face, in mask pixel coordinates.
Shape canonical_landmarks();

/// Rasterizes the ten region polygons over the canonical face.
RegionMap build_canonical_region_map();

/// Asset directory layout: regions.png (palette indices 0..10) + regions.json.
inline constexpr const char* kMaskImageName = "regions.png";
inline constexpr const char* kMaskSidecarName = "regions.json";

RegionMap load_region_mask(const std::filesystem::path& dir);
void save_region_mask(const std::filesystem::path& dir, const RegionMap& regions);

double region_density(const WrinkleMap& map, const RegionMap& regions, int region_id,
                      double threshold);
double face_density(const WrinkleMap& map, const RegionMap& regions, double threshold);

struct DensityRecord {
  std::string subject_id;
  int age = 0;
  bool smoker = false;
  std::array<double, kRegionCount> region_density{};
  double face_density = 0.0;

  friend bool operator==(const DensityRecord&, const DensityRecord&) = default;
};

/// All ten region densities and the whole-face density in one pass.
DensityRecord measure_densities(const WrinkleMap& map, const RegionMap& regions, double threshold);

/// CSV with header subject_id,age,smoker,r1..r10,face.
void write_density_csv(const std::filesystem::path& path, std::vector<DensityRecord> records);

}  // namespace wrinklemap
