#include "wrinklemap/regions.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"
#include "wrinklemap/error.hpp"
#include "wrinklemap/png_io.hpp"

namespace wrinklemap {

namespace {

constexpr std::string_view kRegionNames[kRegionCount + 1] = {
    "outside",         "forehead",           "glabella",    "upper eyelids",
    "crow's feet",     "lower eyelids",      "cheeks",      "nasolabial grooves",
    "upper lips",      "marionette",         "lower lips",
};

constexpr PaletteEntry kPalette[kRegionCount + 1] = {
    {0, 0, 0},       {230, 159, 0},  {86, 180, 233}, {0, 158, 115},
    {240, 228, 66},  {0, 114, 178},  {213, 94, 0},   {204, 121, 167},
    {120, 120, 120}, {170, 68, 153}, {68, 170, 153},
};

void check_region_id(int region_id) {
  require(region_id >= 1 && region_id <= kRegionCount, ErrorCode::kInvalidInput,
          "region id must be in 1.." + std::to_string(kRegionCount) + ", got " +
              std::to_string(region_id));
}

void check_density_inputs(const WrinkleMap& map, const RegionMap& regions, double threshold) {
  require(map.width() == regions.width() && map.height() == regions.height(),
          ErrorCode::kInvalidInput,
          "wrinkle map is " + std::to_string(map.width()) + "x" + std::to_string(map.height()) +
              " but the region mask is " + std::to_string(regions.width()) + "x" +
              std::to_string(regions.height()));
  require(threshold >= 0.0 && threshold <= 1.0, ErrorCode::kInvalidInput,
          "threshold must lie in [0, 1]");
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

}  // namespace

std::string_view region_name(int region_id) {
  require(region_id >= 0 && region_id <= kRegionCount, ErrorCode::kInvalidInput,
          "unknown region id " + std::to_string(region_id));
  return kRegionNames[region_id];
}

RegionMap::RegionMap(int width, int height, std::vector<std::uint8_t> labels,
                     Shape canonical_landmarks)
    : width_(width), height_(height), labels_(std::move(labels)),
      landmarks_(std::move(canonical_landmarks)) {
  require(width > 0 && height > 0, ErrorCode::kCorruptAsset, "mask has no pixels");
  require(labels_.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
          ErrorCode::kCorruptAsset, "mask label count does not match its dimensions");
  for (const std::uint8_t label : labels_) {
    require(label <= kRegionCount, ErrorCode::kCorruptAsset,
            "mask contains unknown label " + std::to_string(label));
    ++areas_[label];
  }
  for (int id = 1; id <= kRegionCount; ++id) {
    require(areas_[static_cast<std::size_t>(id)] > 0, ErrorCode::kCorruptAsset,
            "mask is missing region " + std::to_string(id) + " (" +
                std::string(kRegionNames[id]) + ")");
    mask_area_ += areas_[static_cast<std::size_t>(id)];
  }
  try {
    validate_landmarks(landmarks_, width_, height_);
    triangles_ = delaunay_triangulation(landmarks_);
  } catch (const Error& e) {
    fail(ErrorCode::kCorruptAsset, std::string("mask landmarks: ") + e.what());
  }
}

std::size_t RegionMap::region_area(int region_id) const {
  check_region_id(region_id);
  return areas_[static_cast<std::size_t>(region_id)];
}

RegionMap load_region_mask(const std::filesystem::path& dir) {
  const std::filesystem::path sidecar_path = dir / kMaskSidecarName;
  std::ifstream in(sidecar_path);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + sidecar_path.string());
  nlohmann::json sidecar;
  try {
    in >> sidecar;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kCorruptAsset, sidecar_path.string() + ": " + e.what());
  }

  Shape landmarks;
  try {
    for (const auto& p : sidecar.at("canonical_landmarks")) {
      landmarks.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kCorruptAsset, sidecar_path.string() + ": " + e.what());
  }

  IndexedImage image = read_png_indexed(dir / kMaskImageName);
  if (sidecar.contains("width") && sidecar.contains("height")) {
    require(sidecar["width"] == image.width && sidecar["height"] == image.height,
            ErrorCode::kCorruptAsset, "mask sidecar dimensions disagree with " +
                                          std::string(kMaskImageName));
  }
  return RegionMap(image.width, image.height, std::move(image.indices), std::move(landmarks));
}

void save_region_mask(const std::filesystem::path& dir, const RegionMap& regions) {
  std::filesystem::create_directories(dir);
  write_png_indexed(dir / kMaskImageName,
                    IndexedImage{regions.width(), regions.height(), regions.labels()}, kPalette);

  nlohmann::ordered_json sidecar;
  sidecar["width"] = regions.width();
  sidecar["height"] = regions.height();
  nlohmann::ordered_json names = nlohmann::ordered_json::array();
  for (int id = 1; id <= kRegionCount; ++id) {
    names.push_back({{"id", id}, {"name", std::string(kRegionNames[id])}});
  }
  sidecar["regions"] = names;
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  for (const Point2& p : regions.canonical_landmarks()) points.push_back({p.x, p.y});
  sidecar["canonical_landmarks"] = points;

  const std::filesystem::path sidecar_path = dir / kMaskSidecarName;
  std::ofstream out(sidecar_path);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + sidecar_path.string());
  out << sidecar.dump(2) << '\n';
}

double region_density(const WrinkleMap& map, const RegionMap& regions, int region_id,
                      double threshold) {
  check_density_inputs(map, regions, threshold);
  check_region_id(region_id);
  const auto& labels = regions.labels();
  auto response = map.image().pixels();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == region_id && response[i] >= threshold) ++hits;
  }
  return kDensityScale * static_cast<double>(hits) / static_cast<double>(regions.mask_area());
}

double face_density(const WrinkleMap& map, const RegionMap& regions, double threshold) {
  return measure_densities(map, regions, threshold).face_density;
}

DensityRecord measure_densities(const WrinkleMap& map, const RegionMap& regions,
                                double threshold) {
  check_density_inputs(map, regions, threshold);
  const auto& labels = regions.labels();
  auto response = map.image().pixels();
  std::array<std::size_t, kRegionCount + 1> hits{};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && response[i] >= threshold) ++hits[labels[i]];
  }
  DensityRecord record;
  const double area = static_cast<double>(regions.mask_area());
  std::size_t total = 0;
  for (int id = 1; id <= kRegionCount; ++id) {
    record.region_density[static_cast<std::size_t>(id - 1)] =
        kDensityScale * static_cast<double>(hits[static_cast<std::size_t>(id)]) / area;
    total += hits[static_cast<std::size_t>(id)];
  }
  record.face_density = kDensityScale * static_cast<double>(total) / area;
  return record;
}

void write_density_csv(const std::filesystem::path& path, std::vector<DensityRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const DensityRecord& a, const DensityRecord& b) { return a.subject_id < b.subject_id; });
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot write " + path.string());
  out << "subject_id,age,smoker";
  for (int id = 1; id <= kRegionCount; ++id) out << ",r" << id;
  out << ",face\n";
  for (const DensityRecord& r : records) {
    out << r.subject_id << ',' << r.age << ',' << (r.smoker ? "true" : "false");
    for (const double d : r.region_density) out << ',' << format_fixed(d, 4);
    out << ',' << format_fixed(r.face_density, 4) << '\n';
  }
  require(static_cast<bool>(out), ErrorCode::kIo, "failed writing " + path.string());
}

}  // namespace wrinklemap
