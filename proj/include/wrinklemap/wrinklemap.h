/*
 * wrinklemap C API
 *
 * Facial wrinkle maps from 2D face images: Hessian ridge filtering in two
 * orientations, landmark alignment onto a ten-region face mask, per-region
 * wrinkle density, cohort statistics and normal-map export.
 *
 * Conventions
 *   - Every function that can fail returns a wm_status. On failure a
 *     human-readable message is available from wm_last_error() on the same
 *     thread until the next failing call.
 *   - Objects are opaque handles created by *_create / *_load / *_run calls
 *     and released by the matching *_free function (NULL is accepted).
 *   - Point lists are interleaved doubles: x0, y0, x1, y1, ...
 *   - Statistics that are undefined for the input (empty group, fewer than
 *     two age groups, ...) are reported as NaN.
 */
#ifndef WRINKLEMAP_WRINKLEMAP_H_
#define WRINKLEMAP_WRINKLEMAP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(WRINKLEMAP_BUILDING)
#define WM_API __declspec(dllexport)
#else
#define WM_API __declspec(dllimport)
#endif
#else
#define WM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wm_status {
  WM_OK = 0,
  WM_ERR_INVALID_INPUT = 1,
  WM_ERR_DEGENERATE_SHAPE = 2,
  WM_ERR_DEGENERATE_GEOMETRY = 3,
  WM_ERR_CORRUPT_ASSET = 4,
  WM_ERR_OUT_OF_RANGE = 5,
  WM_ERR_UNDEFINED_CORRELATION = 6,
  WM_ERR_IO = 7,
  WM_ERR_PARSE = 8,
  WM_ERR_NULL_POINTER = 9,
  WM_ERR_INTERNAL = 10
} wm_status;

WM_API const char* wm_version(void);
WM_API const char* wm_status_name(wm_status status);
WM_API const char* wm_last_error(void);

/* ---- Images -------------------------------------------------------------- */

/* Single-channel real-valued image (intensities on the 0..255 scale, or
 * responses in [0, 1] for wrinkle maps). */
typedef struct wm_image wm_image;

WM_API wm_status wm_image_create(int32_t width, int32_t height, const double* pixels,
                                 wm_image** out);
/* Loads any 8-bit PNG and converts it to luma (Rec.601). */
WM_API wm_status wm_image_load_png(const char* path, wm_image** out);
/* Writes round-to-nearest 8-bit grayscale, clamped to [0, 255]. */
WM_API wm_status wm_image_save_png(const wm_image* image, const char* path);
WM_API int32_t wm_image_width(const wm_image* image);
WM_API int32_t wm_image_height(const wm_image* image);
WM_API const double* wm_image_pixels(const wm_image* image);
WM_API void wm_image_free(wm_image* image);

/* ---- Ridge filter -------------------------------------------------------- */

typedef enum wm_orientation {
  WM_ORIENTATION_HORIZONTAL = 0,
  WM_ORIENTATION_VERTICAL = 1
} wm_orientation;

/* Single-orientation response in [0, 1], peak normalized to 1. */
WM_API wm_status wm_hhf_response(const wm_image* gray, wm_orientation orientation, double sigma,
                                 wm_image** out);
/* Both orientations combined, in [0, 1]. */
WM_API wm_status wm_wrinkle_map(const wm_image* gray, double sigma, wm_image** out);
/* PNG in, 8-bit wrinkle-map PNG out (value = round(255 * response)). */
WM_API wm_status wm_filter_png(const char* input_png, const char* output_png, double sigma);

/* ---- Relief -------------------------------------------------------------- */

/* Reads an 8-bit wrinkle-map PNG and writes an RGB normal map plus a JSON
 * sidecar next to it (same name, .json extension). */
WM_API wm_status wm_relief_png(const char* wrinkle_png, const char* output_png, double weight,
                               double intensity_scale);

/* ---- Shapes -------------------------------------------------------------- */

typedef struct wm_similarity {
  double scale;
  double rotation; /* radians */
  double tx;
  double ty;
} wm_similarity;

WM_API wm_status wm_procrustes_distance(const double* shape_xy, const double* mean_xy,
                                        size_t point_count, double* out);
/* aligned_xy receives point_count interleaved points; transform may be NULL. */
WM_API wm_status wm_align_to_mean(const double* shape_xy, const double* mean_xy,
                                  size_t point_count, double* aligned_xy,
                                  wm_similarity* transform);

/* ---- Region mask and density ---------------------------------------------- */

typedef struct wm_region_map wm_region_map;

WM_API wm_status wm_region_map_load(const char* mask_dir, wm_region_map** out);
/* Writes the built-in canonical mask (regions.png + regions.json) into mask_dir. */
WM_API wm_status wm_region_map_write_canonical(const char* mask_dir);
WM_API int32_t wm_region_map_width(const wm_region_map* regions);
WM_API int32_t wm_region_map_height(const wm_region_map* regions);
WM_API const char* wm_region_name(int32_t region_id);
WM_API void wm_region_map_free(wm_region_map* regions);

/* wrinkle_map values must lie in [0, 1]. Densities are 1e4 x fraction of mask pixels. */
WM_API wm_status wm_region_density(const wm_image* wrinkle_map, const wm_region_map* regions,
                                   int32_t region_id, double threshold, double* out);
WM_API wm_status wm_face_density(const wm_image* wrinkle_map, const wm_region_map* regions,
                                 double threshold, double* out);

/* ---- Statistics ---------------------------------------------------------- */

typedef enum wm_test { WM_TEST_MANN_WHITNEY = 0, WM_TEST_WELCH = 1 } wm_test;

WM_API wm_status wm_pearson(const double* xs, const double* ys, size_t count, double* out);
WM_API wm_status wm_two_sample_test(const double* a, size_t a_count, const double* b,
                                    size_t b_count, wm_test test, double* p_value);

/* ---- Batch pipeline ------------------------------------------------------ */

typedef void (*wm_log_fn)(const char* message, void* user_data);

typedef struct wm_run_config {
  const char* manifest_path;
  const char* mask_dir;
  const char* output_dir;
  double sigma;          /* default 2.0 */
  double threshold;      /* default 0.3 */
  wm_test test;          /* default WM_TEST_MANN_WHITNEY */
  double relief_weight;  /* default -1.0 */
  double relief_scale;   /* default 0.3 */
  int32_t recompute_mean; /* nonzero: generalized-Procrustes mean of the cohort */
  wm_log_fn log;         /* optional */
  void* log_user_data;
} wm_run_config;

typedef struct wm_density_record {
  const char* subject_id; /* valid while the owning result lives */
  int32_t age;
  int32_t smoker;
  double region_density[10];
  double face_density;
} wm_density_record;

typedef struct wm_run_result wm_run_result;

WM_API void wm_run_config_init(wm_run_config* config);

/* Returns WM_OK and a result whenever the batch ran, even if every subject
 * failed; check wm_run_result_succeeded. Errors are returned only for
 * problems that stop the whole batch (bad manifest, missing mask, ...). */
WM_API wm_status wm_run_pipeline(const wm_run_config* config, wm_run_result** out);
WM_API size_t wm_run_result_succeeded(const wm_run_result* result);
WM_API size_t wm_run_result_failed(const wm_run_result* result);
WM_API const char* wm_run_result_failure(const wm_run_result* result, size_t index);
WM_API wm_status wm_run_result_record(const wm_run_result* result, size_t index,
                                      wm_density_record* out);
/* which: 0 overall, 1 smokers, 2 non-smokers. */
WM_API double wm_run_result_correlation(const wm_run_result* result, int32_t which);
WM_API wm_status wm_run_result_region(const wm_run_result* result, int32_t region_id,
                                      double* mean_non_smoker, double* mean_smoker,
                                      double* p_value);
/* group_index 1..7; any output pointer may be NULL. */
WM_API wm_status wm_run_result_group(const wm_run_result* result, int32_t group_index,
                                     double* overall, double* smoker, double* non_smoker);
WM_API void wm_run_result_free(wm_run_result* result);

#ifdef __cplusplus
}
#endif

#endif /* WRINKLEMAP_WRINKLEMAP_H_ */
