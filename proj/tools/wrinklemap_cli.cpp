// wrinklemap command-line front end. Talks to the library only through the C API.
#include <cmath>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "wrinklemap/wrinklemap.h"

namespace {

int report_failure(wm_status status) {
  std::fprintf(stderr, "error (%s): %s\n", wm_status_name(status), wm_last_error());
  return 2;
}

void log_to_stderr(const char* message, void*) { std::fprintf(stderr, "%s\n", message); }

void print_value(const char* label, double v) {
  if (std::isnan(v)) {
    std::printf("%s: n/a\n", label);
  } else {
    std::printf("%s: %.3f\n", label, v);
  }
}

int run_batch(const wm_run_config& config) {
  wm_run_result* result = nullptr;
  const wm_status status = wm_run_pipeline(&config, &result);
  if (status != WM_OK) return report_failure(status);

  const size_t ok = wm_run_result_succeeded(result);
  const size_t failed = wm_run_result_failed(result);
  std::printf("subjects processed: %zu, skipped: %zu\n", ok, failed);
  print_value("age correlation (all)", wm_run_result_correlation(result, 0));
  print_value("age correlation (smokers)", wm_run_result_correlation(result, 1));
  print_value("age correlation (non-smokers)", wm_run_result_correlation(result, 2));
  std::printf("outputs written to %s\n", config.output_dir);
  wm_run_result_free(result);
  if (ok == 0) {
    std::fprintf(stderr, "error: no subject could be processed\n");
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Facial wrinkle maps, regional densities and cohort statistics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(wm_version()));

  wm_run_config config;
  wm_run_config_init(&config);

  std::string manifest;
  std::string mask_dir;
  std::string out_dir;
  std::string test = "mann-whitney";
  bool recompute_mean = false;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Process a cohort manifest and write densities and reports");
  run->add_option("--manifest", manifest, "CSV with subject_id,image,landmarks,age,smoker")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--mask", mask_dir, "Directory holding regions.png and regions.json")
      ->required()
      ->check(CLI::ExistingDirectory);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--sigma", config.sigma, "Gaussian scale in pixels")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  run->add_option("--threshold", config.threshold, "Wrinkle response threshold")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  run->add_option("--test", test, "Smoker vs non-smoker test")
      ->capture_default_str()
      ->check(CLI::IsMember({"mann-whitney", "welch"}));
  run->add_option("--relief-weight", config.relief_weight, "Normal-map height weight")
      ->capture_default_str();
  run->add_option("--relief-scale", config.relief_scale, "Normal-map intensity scale")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  run->add_flag("--recompute-mean", recompute_mean,
                "Use the cohort's generalized-Procrustes mean instead of the shipped mean shape");
  run->add_flag("-q,--quiet", quiet, "Do not log skipped subjects");

  std::string filter_in;
  std::string filter_out;
  double filter_sigma = config.sigma;
  auto* filter = app.add_subcommand("filter", "Compute the wrinkle map of a single image");
  filter->add_option("image", filter_in, "Input PNG")->required()->check(CLI::ExistingFile);
  filter->add_option("--out", filter_out, "Output PNG (8-bit wrinkle map)")->required();
  filter->add_option("--sigma", filter_sigma, "Gaussian scale in pixels")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::string relief_in;
  std::string relief_out;
  double relief_weight = config.relief_weight;
  double relief_scale = config.relief_scale;
  auto* relief = app.add_subcommand("relief", "Convert a wrinkle-map PNG into a normal map");
  relief->add_option("wrinkle-map", relief_in, "8-bit wrinkle-map PNG")
      ->required()
      ->check(CLI::ExistingFile);
  relief->add_option("--out", relief_out, "Output RGB PNG; a .json sidecar is written beside it")
      ->required();
  relief->add_option("--weight", relief_weight, "Height weight")->capture_default_str();
  relief->add_option("--scale", relief_scale, "Intensity scale")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));

  std::string mask_out;
  auto* make_mask = app.add_subcommand("make-mask", "Write the built-in canonical region mask");
  make_mask->add_option("--out", mask_out, "Destination directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    config.manifest_path = manifest.c_str();
    config.mask_dir = mask_dir.c_str();
    config.output_dir = out_dir.c_str();
    config.test = test == "welch" ? WM_TEST_WELCH : WM_TEST_MANN_WHITNEY;
    config.recompute_mean = recompute_mean ? 1 : 0;
    if (!quiet) config.log = log_to_stderr;
    return run_batch(config);
  }
  if (*filter) {
    const wm_status s = wm_filter_png(filter_in.c_str(), filter_out.c_str(), filter_sigma);
    return s == WM_OK ? 0 : report_failure(s);
  }
  if (*relief) {
    const wm_status s =
        wm_relief_png(relief_in.c_str(), relief_out.c_str(), relief_weight, relief_scale);
    return s == WM_OK ? 0 : report_failure(s);
  }
  if (*make_mask) {
    const wm_status s = wm_region_map_write_canonical(mask_out.c_str());
    return s == WM_OK ? 0 : report_failure(s);
  }
  return 0;
}
