#include "wrinklemap/relief.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "wrinklemap/error.hpp"
#include "wrinklemap/png_io.hpp"

namespace wrinklemap {

namespace {

std::uint8_t encode_component(double n) noexcept { return quantize_u8(127.5 * (n + 1.0)); }

// Central difference inside, one-sided on the border; single-pixel axes have no slope.
double slope(const GrayImage& h, int x, int y, bool along_x) {
  const int n = along_x ? h.width() : h.height();
  const int i = along_x ? x : y;
  if (n < 2) return 0.0;
  auto sample = [&](int k) { return along_x ? h.at(k, y) : h.at(x, k); };
  if (i == 0) return sample(1) - sample(0);
  if (i == n - 1) return sample(n - 1) - sample(n - 2);
  return 0.5 * (sample(i + 1) - sample(i - 1));
}

}  // namespace

void ReliefParams::validate() const {
  require(std::isfinite(weight), ErrorCode::kInvalidInput, "relief weight must be finite");
  require(intensity_scale >= 0.0 && intensity_scale <= 1.0, ErrorCode::kInvalidInput,
          "relief intensity scale must lie in [0, 1]");
}

RgbImage height_to_normal_map(const GrayImage& height, const ReliefParams& params) {
  params.validate();
  require(!height.empty(), ErrorCode::kInvalidInput, "cannot build a normal map from an empty image");
  const double gain = params.weight * params.intensity_scale;

  RgbImage out(height.width(), height.height());
  for (int y = 0; y < height.height(); ++y) {
    for (int x = 0; x < height.width(); ++x) {
      const double nx = -gain * slope(height, x, y, true);
      const double ny = -gain * slope(height, x, y, false);
      const double len = std::sqrt(nx * nx + ny * ny + 1.0);
      out.at(x, y, 0) = encode_component(nx / len);
      out.at(x, y, 1) = encode_component(ny / len);
      out.at(x, y, 2) = encode_component(1.0 / len);
    }
  }
  return out;
}

RgbImage height_to_normal_map(const WrinkleMap& map, const ReliefParams& params) {
  return height_to_normal_map(map.image(), params);
}

void write_normal_map(const std::filesystem::path& png_path, const RgbImage& normals,
                      const ReliefParams& params) {
  write_png_rgb(png_path, normals);
  nlohmann::ordered_json sidecar;
  sidecar["weight"] = params.weight;
  sidecar["intensity_scale"] = params.intensity_scale;
  sidecar["encoding"] = "channel = round(127.5 * (component + 1))";
  sidecar["x_axis"] = "image right";
  sidecar["y_axis"] = "image down";
  sidecar["z_axis"] = "out of the surface";
  std::filesystem::path sidecar_path = png_path;
  sidecar_path.replace_extension(".json");
  std::ofstream out(sidecar_path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + sidecar_path.string());
  out << sidecar.dump(2) << '\n';
}

}  // namespace wrinklemap
