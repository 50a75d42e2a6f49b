#pragma once

#include <filesystem>

#include "wrinklemap/hhf.hpp"
#include "wrinklemap/image.hpp"

namespace wrinklemap {

struct ReliefParams {
  // Negative weight pushes bright (wrinkled) areas into the surface.
  double weight = -1.0;
  double intensity_scale = 0.3;

  void validate() const;
};

/// Tangent-space normals of the height field weight * intensity_scale * height,
/// encoded per channel as round(127.5 * (n + 1)). +x is image-right, +y is
/// image-down, +z points out of the surface.
RgbImage height_to_normal_map(const GrayImage& height, const ReliefParams& params = {});
RgbImage height_to_normal_map(const WrinkleMap& map, const ReliefParams& params = {});

/// Writes the PNG plus a JSON sidecar (same stem, .json) recording the
/// parameters and the axis convention.
void write_normal_map(const std::filesystem::path& png_path, const RgbImage& normals,
                      const ReliefParams& params);

}  // namespace wrinklemap
