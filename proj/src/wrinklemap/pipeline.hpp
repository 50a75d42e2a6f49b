#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "wrinklemap/cohort.hpp"
#include "wrinklemap/hhf.hpp"
#include "wrinklemap/regions.hpp"
#include "wrinklemap/relief.hpp"
#include "wrinklemap/shape.hpp"

namespace wrinklemap {

struct ManifestEntry {
  std::string subject_id;
  std::filesystem::path image_path;
  std::filesystem::path landmarks_path;
  int age = 0;
  bool smoker = false;
};

/// CSV manifest with header `subject_id,image,landmarks,age,smoker`. Relative
/// paths are resolved against the manifest's directory.
std::vector<ManifestEntry> parse_manifest(const std::filesystem::path& path);

struct RunConfig {
  FilterParams filter;
  std::filesystem::path mask_dir;
  std::filesystem::path output_dir;
  SignificanceTest test = SignificanceTest::kMannWhitney;
  ReliefParams relief;
  bool recompute_mean = false;
  MeanShapeOptions mean_options;
  // Receives one line per skipped subject and per notable event.
  std::function<void(const std::string&)> log;

  void validate() const;
};

struct SubjectResult {
  DensityRecord record;
  double procrustes_distance = 0.0;  // aligned landmarks vs. the mean shape
};

/// Grayscale -> Procrustes alignment -> warp onto the mask -> wrinkle map ->
/// densities. Writes warped.png, wrinkles.png, normal.png and normal.json into
/// <output_dir>/subjects/<subject_id>/. Throws on any failure.
SubjectResult process_subject(const ManifestEntry& entry, const Shape& mean,
                              const RegionMap& regions, const RunConfig& config);

struct RunResult {
  std::vector<DensityRecord> records;  // sorted by subject_id
  std::vector<std::string> failures;   // "<subject_id>: <reason>"
  CohortReport report;

  bool succeeded() const noexcept { return !records.empty(); }
};

/// Mean shape registered to the mask: the shipped canonical landmarks, or
/// (recompute_mean) the generalized-Procrustes mean of the given shapes
/// aligned onto them.
Shape registered_mean_shape(const RegionMap& regions, std::span<const Shape> cohort_shapes,
                            const MeanShapeOptions& options);

/// Processes every subject, skipping failures, then writes densities.csv,
/// report_groups.csv, report_regions.csv and summary.txt into the output directory.
RunResult run_pipeline(const std::filesystem::path& manifest, const RunConfig& config);

}  // namespace wrinklemap
