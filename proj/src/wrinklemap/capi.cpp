#include "wrinklemap/wrinklemap.h"

#include <cmath>
#include <filesystem>
#include <limits>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wrinklemap/cohort.hpp"
#include "wrinklemap/error.hpp"
#include "wrinklemap/hhf.hpp"
#include "wrinklemap/image.hpp"
#include "wrinklemap/pipeline.hpp"
#include "wrinklemap/png_io.hpp"
#include "wrinklemap/regions.hpp"
#include "wrinklemap/relief.hpp"
#include "wrinklemap/shape.hpp"

struct wm_image {
  wrinklemap::GrayImage image;
};

struct wm_region_map {
  wrinklemap::RegionMap map;
};

struct wm_run_result {
  wrinklemap::RunResult result;
};

namespace {

using wrinklemap::ErrorCode;

thread_local std::string g_last_error;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

wm_status to_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidInput: return WM_ERR_INVALID_INPUT;
    case ErrorCode::kDegenerateShape: return WM_ERR_DEGENERATE_SHAPE;
    case ErrorCode::kDegenerateGeometry: return WM_ERR_DEGENERATE_GEOMETRY;
    case ErrorCode::kCorruptAsset: return WM_ERR_CORRUPT_ASSET;
    case ErrorCode::kOutOfRange: return WM_ERR_OUT_OF_RANGE;
    case ErrorCode::kUndefinedCorrelation: return WM_ERR_UNDEFINED_CORRELATION;
    case ErrorCode::kIo: return WM_ERR_IO;
    case ErrorCode::kParse: return WM_ERR_PARSE;
  }
  return WM_ERR_INTERNAL;
}

wm_status set_error(wm_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn and converts any exception into a status plus a stored message.
template <typename Fn>
wm_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return WM_OK;
  } catch (const wrinklemap::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return set_error(WM_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(WM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(WM_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(WM_ERR_INTERNAL, "unknown error");
  }
}

#define WM_REQUIRE_PTR(p)                                                     \
  do {                                                                        \
    if ((p) == nullptr) return set_error(WM_ERR_NULL_POINTER, #p " is NULL"); \
  } while (0)

wrinklemap::Shape to_shape(const double* xy, std::size_t n) {
  wrinklemap::Shape shape(n);
  for (std::size_t i = 0; i < n; ++i) shape[i] = {xy[2 * i], xy[2 * i + 1]};
  return shape;
}

double or_nan(const std::optional<double>& v) { return v ? *v : kNaN; }

wrinklemap::SignificanceTest to_test(wm_test test) {
  switch (test) {
    case WM_TEST_MANN_WHITNEY: return wrinklemap::SignificanceTest::kMannWhitney;
    case WM_TEST_WELCH: return wrinklemap::SignificanceTest::kWelch;
  }
  wrinklemap::fail(ErrorCode::kInvalidInput, "unknown significance test");
}

wm_image* wrap(wrinklemap::GrayImage img) { return new wm_image{std::move(img)}; }

}  // namespace

extern "C" {

const char* wm_version(void) { return "1.0.0"; }

const char* wm_status_name(wm_status status) {
  switch (status) {
    case WM_OK: return "ok";
    case WM_ERR_INVALID_INPUT: return "invalid input";
    case WM_ERR_DEGENERATE_SHAPE: return "degenerate shape";
    case WM_ERR_DEGENERATE_GEOMETRY: return "degenerate geometry";
    case WM_ERR_CORRUPT_ASSET: return "corrupt asset";
    case WM_ERR_OUT_OF_RANGE: return "out of range";
    case WM_ERR_UNDEFINED_CORRELATION: return "undefined correlation";
    case WM_ERR_IO: return "i/o error";
    case WM_ERR_PARSE: return "parse error";
    case WM_ERR_NULL_POINTER: return "null pointer";
    case WM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* wm_last_error(void) { return g_last_error.c_str(); }

wm_status wm_image_create(int32_t width, int32_t height, const double* pixels, wm_image** out) {
  WM_REQUIRE_PTR(out);
  WM_REQUIRE_PTR(pixels);
  *out = nullptr;
  return guarded([&] {
    wrinklemap::require(width > 0 && height > 0, ErrorCode::kInvalidInput,
                        "image dimensions must be positive");
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    *out = wrap(wrinklemap::GrayImage(width, height, std::vector<double>(pixels, pixels + n)));
  });
}

wm_status wm_image_load_png(const char* path, wm_image** out) {
  WM_REQUIRE_PTR(path);
  WM_REQUIRE_PTR(out);
  *out = nullptr;
  return guarded([&] { *out = wrap(wrinklemap::read_png_gray(path)); });
}

wm_status wm_image_save_png(const wm_image* image, const char* path) {
  WM_REQUIRE_PTR(image);
  WM_REQUIRE_PTR(path);
  return guarded([&] { wrinklemap::write_png_gray(path, image->image); });
}

int32_t wm_image_width(const wm_image* image) { return image ? image->image.width() : 0; }
int32_t wm_image_height(const wm_image* image) { return image ? image->image.height() : 0; }
const double* wm_image_pixels(const wm_image* image) {
  return image ? image->image.pixels().data() : nullptr;
}
void wm_image_free(wm_image* image) { delete image; }

wm_status wm_hhf_response(const wm_image* gray, wm_orientation orientation, double sigma,
                          wm_image** out) {
  WM_REQUIRE_PTR(gray);
  WM_REQUIRE_PTR(out);
  *out = nullptr;
  return guarded([&] {
    wrinklemap::require(orientation == WM_ORIENTATION_HORIZONTAL ||
                            orientation == WM_ORIENTATION_VERTICAL,
                        ErrorCode::kInvalidInput, "unknown orientation");
    wrinklemap::FilterParams params;
    params.sigma = sigma;
    const auto o = orientation == WM_ORIENTATION_HORIZONTAL ? wrinklemap::Orientation::kHorizontal
                                                            : wrinklemap::Orientation::kVertical;
    *out = wrap(wrinklemap::hhf_response(gray->image, o, params).image());
  });
}

wm_status wm_wrinkle_map(const wm_image* gray, double sigma, wm_image** out) {
  WM_REQUIRE_PTR(gray);
  WM_REQUIRE_PTR(out);
  *out = nullptr;
  return guarded([&] {
    wrinklemap::FilterParams params;
    params.sigma = sigma;
    *out = wrap(wrinklemap::combined_wrinkle_map(gray->image, params).image());
  });
}

namespace {

void make_parent_dirs(const char* path) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

}  // namespace

wm_status wm_filter_png(const char* input_png, const char* output_png, double sigma) {
  WM_REQUIRE_PTR(input_png);
  WM_REQUIRE_PTR(output_png);
  return guarded([&] {
    wrinklemap::FilterParams params;
    params.sigma = sigma;
    const auto map = wrinklemap::combined_wrinkle_map(wrinklemap::read_png_gray(input_png), params);
    make_parent_dirs(output_png);
    wrinklemap::write_png_gray(output_png, map.to_intensity());
  });
}

wm_status wm_relief_png(const char* wrinkle_png, const char* output_png, double weight,
                        double intensity_scale) {
  WM_REQUIRE_PTR(wrinkle_png);
  WM_REQUIRE_PTR(output_png);
  return guarded([&] {
    const wrinklemap::ReliefParams params{weight, intensity_scale};
    params.validate();
    const auto map = wrinklemap::WrinkleMap::from_intensity(wrinklemap::read_png_gray(wrinkle_png));
    make_parent_dirs(output_png);
    wrinklemap::write_normal_map(output_png, wrinklemap::height_to_normal_map(map, params), params);
  });
}

wm_status wm_procrustes_distance(const double* shape_xy, const double* mean_xy,
                                 size_t point_count, double* out) {
  WM_REQUIRE_PTR(shape_xy);
  WM_REQUIRE_PTR(mean_xy);
  WM_REQUIRE_PTR(out);
  return guarded([&] {
    const auto mean = to_shape(mean_xy, point_count);
    const auto aligned = wrinklemap::align_to_mean(to_shape(shape_xy, point_count), mean).aligned;
    *out = wrinklemap::procrustes_distance(aligned, mean);
  });
}

wm_status wm_align_to_mean(const double* shape_xy, const double* mean_xy, size_t point_count,
                           double* aligned_xy, wm_similarity* transform) {
  WM_REQUIRE_PTR(shape_xy);
  WM_REQUIRE_PTR(mean_xy);
  WM_REQUIRE_PTR(aligned_xy);
  return guarded([&] {
    const auto a = wrinklemap::align_to_mean(to_shape(shape_xy, point_count),
                                             to_shape(mean_xy, point_count));
    for (std::size_t i = 0; i < point_count; ++i) {
      aligned_xy[2 * i] = a.aligned[i].x;
      aligned_xy[2 * i + 1] = a.aligned[i].y;
    }
    if (transform != nullptr) {
      *transform = {a.transform.scale, a.transform.rotation, a.transform.tx, a.transform.ty};
    }
  });
}

wm_status wm_region_map_load(const char* mask_dir, wm_region_map** out) {
  WM_REQUIRE_PTR(mask_dir);
  WM_REQUIRE_PTR(out);
  *out = nullptr;
  return guarded([&] { *out = new wm_region_map{wrinklemap::load_region_mask(mask_dir)}; });
}

wm_status wm_region_map_write_canonical(const char* mask_dir) {
  WM_REQUIRE_PTR(mask_dir);
  return guarded([&] {
    wrinklemap::save_region_mask(mask_dir, wrinklemap::build_canonical_region_map());
  });
}

int32_t wm_region_map_width(const wm_region_map* regions) { return regions ? regions->map.width() : 0; }
int32_t wm_region_map_height(const wm_region_map* regions) {
  return regions ? regions->map.height() : 0;
}

const char* wm_region_name(int32_t region_id) {
  if (region_id < 0 || region_id > wrinklemap::kRegionCount) return nullptr;
  // Names are string literals, so the view's data is null-terminated.
  return wrinklemap::region_name(region_id).data();
}

void wm_region_map_free(wm_region_map* regions) { delete regions; }

wm_status wm_region_density(const wm_image* wrinkle_map, const wm_region_map* regions,
                            int32_t region_id, double threshold, double* out) {
  WM_REQUIRE_PTR(wrinkle_map);
  WM_REQUIRE_PTR(regions);
  WM_REQUIRE_PTR(out);
  return guarded([&] {
    *out = wrinklemap::region_density(wrinklemap::WrinkleMap(wrinkle_map->image), regions->map,
                                      region_id, threshold);
  });
}

wm_status wm_face_density(const wm_image* wrinkle_map, const wm_region_map* regions,
                          double threshold, double* out) {
  WM_REQUIRE_PTR(wrinkle_map);
  WM_REQUIRE_PTR(regions);
  WM_REQUIRE_PTR(out);
  return guarded([&] {
    *out = wrinklemap::face_density(wrinklemap::WrinkleMap(wrinkle_map->image), regions->map,
                                    threshold);
  });
}

wm_status wm_pearson(const double* xs, const double* ys, size_t count, double* out) {
  WM_REQUIRE_PTR(xs);
  WM_REQUIRE_PTR(ys);
  WM_REQUIRE_PTR(out);
  return guarded([&] {
    *out = wrinklemap::pearson_correlation({xs, count}, {ys, count});
  });
}

wm_status wm_two_sample_test(const double* a, size_t a_count, const double* b, size_t b_count,
                             wm_test test, double* p_value) {
  WM_REQUIRE_PTR(a);
  WM_REQUIRE_PTR(b);
  WM_REQUIRE_PTR(p_value);
  return guarded([&] {
    *p_value = wrinklemap::two_sample_test({a, a_count}, {b, b_count}, to_test(test));
  });
}

void wm_run_config_init(wm_run_config* config) {
  if (config == nullptr) return;
  const wrinklemap::FilterParams filter;
  const wrinklemap::ReliefParams relief;
  *config = wm_run_config{};
  config->sigma = filter.sigma;
  config->threshold = filter.response_threshold;
  config->test = WM_TEST_MANN_WHITNEY;
  config->relief_weight = relief.weight;
  config->relief_scale = relief.intensity_scale;
}

wm_status wm_run_pipeline(const wm_run_config* config, wm_run_result** out) {
  WM_REQUIRE_PTR(config);
  WM_REQUIRE_PTR(out);
  WM_REQUIRE_PTR(config->manifest_path);
  WM_REQUIRE_PTR(config->mask_dir);
  WM_REQUIRE_PTR(config->output_dir);
  *out = nullptr;
  return guarded([&] {
    wrinklemap::RunConfig rc;
    rc.filter.sigma = config->sigma;
    rc.filter.response_threshold = config->threshold;
    rc.mask_dir = config->mask_dir;
    rc.output_dir = config->output_dir;
    rc.test = to_test(config->test);
    rc.relief = {config->relief_weight, config->relief_scale};
    rc.recompute_mean = config->recompute_mean != 0;
    if (config->log != nullptr) {
      rc.log = [fn = config->log, user = config->log_user_data](const std::string& message) {
        fn(message.c_str(), user);
      };
    }
    *out = new wm_run_result{wrinklemap::run_pipeline(config->manifest_path, rc)};
  });
}

size_t wm_run_result_succeeded(const wm_run_result* result) {
  return result ? result->result.records.size() : 0;
}

size_t wm_run_result_failed(const wm_run_result* result) {
  return result ? result->result.failures.size() : 0;
}

const char* wm_run_result_failure(const wm_run_result* result, size_t index) {
  if (result == nullptr || index >= result->result.failures.size()) return nullptr;
  return result->result.failures[index].c_str();
}

wm_status wm_run_result_record(const wm_run_result* result, size_t index, wm_density_record* out) {
  WM_REQUIRE_PTR(result);
  WM_REQUIRE_PTR(out);
  if (index >= result->result.records.size()) {
    return set_error(WM_ERR_OUT_OF_RANGE, "record index " + std::to_string(index) + " out of range");
  }
  const wrinklemap::DensityRecord& r = result->result.records[index];
  out->subject_id = r.subject_id.c_str();
  out->age = r.age;
  out->smoker = r.smoker ? 1 : 0;
  for (int i = 0; i < wrinklemap::kRegionCount; ++i) out->region_density[i] = r.region_density[i];
  out->face_density = r.face_density;
  return WM_OK;
}

double wm_run_result_correlation(const wm_run_result* result, int32_t which) {
  if (result == nullptr) return kNaN;
  const wrinklemap::CohortReport& report = result->result.report;
  switch (which) {
    case 0: return or_nan(report.correlation_overall);
    case 1: return or_nan(report.correlation_smoker);
    case 2: return or_nan(report.correlation_non_smoker);
    default: return kNaN;
  }
}

wm_status wm_run_result_region(const wm_run_result* result, int32_t region_id,
                               double* mean_non_smoker, double* mean_smoker, double* p_value) {
  WM_REQUIRE_PTR(result);
  if (region_id < 1 || region_id > wrinklemap::kRegionCount) {
    return set_error(WM_ERR_OUT_OF_RANGE, "region id " + std::to_string(region_id) + " out of range");
  }
  const wrinklemap::RegionComparison& c = result->result.report.regions[region_id - 1];
  if (mean_non_smoker) *mean_non_smoker = or_nan(c.mean_non_smoker);
  if (mean_smoker) *mean_smoker = or_nan(c.mean_smoker);
  if (p_value) *p_value = or_nan(c.p_value);
  return WM_OK;
}

wm_status wm_run_result_group(const wm_run_result* result, int32_t group_index, double* overall,
                              double* smoker, double* non_smoker) {
  WM_REQUIRE_PTR(result);
  if (group_index < 1 || group_index > wrinklemap::kAgeGroupCount) {
    return set_error(WM_ERR_OUT_OF_RANGE, "age group " + std::to_string(group_index) + " out of range");
  }
  const wrinklemap::GroupAverage& g = result->result.report.groups[group_index - 1];
  if (overall) *overall = or_nan(g.overall);
  if (smoker) *smoker = or_nan(g.smoker);
  if (non_smoker) *non_smoker = or_nan(g.non_smoker);
  return WM_OK;
}

void wm_run_result_free(wm_run_result* result) { delete result; }

}  // extern "C"
