#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wrinklemap/regions.hpp"

namespace wrinklemap {

inline constexpr int kAgeGroupCount = 7;
inline constexpr int kMinimumAge = 18;

struct AgeGroup {
  int index;                 // 1..7
  int lower;                 // inclusive
  std::optional<int> upper;  // inclusive; open for the last group
  double midpoint;           // x-value used for the age correlation
  std::string label() const;
};

/// 18-27, 28-37, ..., 68-77, >=78. The open group's midpoint is 83 (middle of 78-88).
const std::array<AgeGroup, kAgeGroupCount>& age_groups();

/// 1-based group index for an age; throws kOutOfRange below 18.
int age_group_index(int age);

using GroupedRecords = std::array<std::vector<DensityRecord>, kAgeGroupCount>;

GroupedRecords group_by_age(std::span<const DensityRecord> records);

struct GroupAverage {
  std::optional<double> overall;
  std::optional<double> smoker;
  std::optional<double> non_smoker;
  std::size_t smoker_count = 0;
  std::size_t non_smoker_count = 0;
};

std::array<GroupAverage, kAgeGroupCount> group_averages(const GroupedRecords& groups);

/// Pearson product-moment coefficient. Throws kUndefinedCorrelation on zero variance.
double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

/// Two-sided Mann-Whitney U test. Exact null distribution when the smaller
/// sample has at most 8 values and there are no ties; otherwise the normal
/// approximation with tie and continuity corrections.
double mann_whitney_p(std::span<const double> a, std::span<const double> b);

/// The normal-approximation branch on its own (tie-corrected, continuity-corrected).
double mann_whitney_p_normal(std::span<const double> a, std::span<const double> b);

/// The exact branch on its own; requires tie-free samples.
double mann_whitney_p_exact(std::span<const double> a, std::span<const double> b);

/// Two-sided Welch's unequal-variance t-test. Needs at least two values per sample.
double welch_t_test_p(std::span<const double> a, std::span<const double> b);

enum class SignificanceTest { kMannWhitney, kWelch };

double two_sample_test(std::span<const double> a, std::span<const double> b,
                       SignificanceTest test = SignificanceTest::kMannWhitney);

struct RegionComparison {
  std::optional<double> mean_non_smoker;
  std::optional<double> mean_smoker;
  std::optional<double> p_value;
};

struct CohortReport {
  std::array<GroupAverage, kAgeGroupCount> groups;
  std::optional<double> correlation_overall;
  std::optional<double> correlation_smoker;
  std::optional<double> correlation_non_smoker;
  std::array<RegionComparison, kRegionCount> regions;
  SignificanceTest test = SignificanceTest::kMannWhitney;
  std::size_t subject_count = 0;
};

CohortReport build_cohort_report(std::span<const DensityRecord> records,
                                 SignificanceTest test = SignificanceTest::kMannWhitney);

/// Writes report_groups.csv, report_regions.csv and summary.txt into `dir`.
/// Absent values are empty fields; p-values are printed with three decimals.
void write_cohort_report(const std::filesystem::path& dir, const CohortReport& report,
                         std::span<const std::string> failures = {});

}  // namespace wrinklemap
