#include "wrinklemap/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "wrinklemap/error.hpp"

namespace wrinklemap {

namespace {

constexpr std::size_t kExactMaxSmallerSample = 8;

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

std::string optional_fixed(const std::optional<double>& value, int digits) {
  return value ? fixed(*value, digits) : std::string();
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void require_samples(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), ErrorCode::kInvalidInput,
          "two-sample test needs two non-empty samples");
  for (std::span<const double> s : {a, b}) {
    for (const double v : s) {
      require(std::isfinite(v), ErrorCode::kInvalidInput, "samples must be finite");
    }
  }
}

// Smaller of U and m*n - U, where U counts pairs with a > b (ties count one half).
double u_statistic_lower(std::span<const double> a, std::span<const double> b) {
  double u = 0.0;
  for (const double x : a) {
    for (const double y : b) {
      if (x > y) {
        u += 1.0;
      } else if (x == y) {
        u += 0.5;
      }
    }
  }
  const double mn = static_cast<double>(a.size()) * static_cast<double>(b.size());
  return std::min(u, mn - u);
}

bool has_ties(std::span<const double> a, std::span<const double> b) {
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  return std::adjacent_find(pooled.begin(), pooled.end()) != pooled.end();
}

// Number of rank arrangements giving each U value, for samples of sizes m and n:
// the coefficients of the Gaussian binomial [m + n choose m]_q.
std::vector<double> u_frequencies(std::size_t m, std::size_t n) {
  if (m > n) std::swap(m, n);
  std::vector<double> c(m * n + 1, 0.0);
  c[0] = 1.0;
  std::size_t degree = 0;
  for (std::size_t i = 1; i <= m; ++i) {
    // Multiply by (1 - q^(n+i)).
    const std::size_t shift = n + i;
    degree += n;
    for (std::size_t k = std::min(degree + i, c.size() - 1) + 1; k-- > shift;) {
      c[k] -= c[k - shift];
    }
    // Divide by (1 - q^i): running sums with stride i.
    for (std::size_t k = i; k < c.size(); ++k) c[k] += c[k - i];
  }
  return c;
}

}  // namespace

std::string AgeGroup::label() const {
  if (!upper) return ">=" + std::to_string(lower);
  return std::to_string(lower) + "-" + std::to_string(*upper);
}

const std::array<AgeGroup, kAgeGroupCount>& age_groups() {
  static const std::array<AgeGroup, kAgeGroupCount> groups = {{
      {1, 18, 27, 22.5},
      {2, 28, 37, 32.5},
      {3, 38, 47, 42.5},
      {4, 48, 57, 52.5},
      {5, 58, 67, 62.5},
      {6, 68, 77, 72.5},
      {7, 78, std::nullopt, 83.0},
  }};
  return groups;
}

int age_group_index(int age) {
  require(age >= kMinimumAge, ErrorCode::kOutOfRange,
          "age " + std::to_string(age) + " is below the minimum of " + std::to_string(kMinimumAge));
  return std::min(kAgeGroupCount, (age - kMinimumAge) / 10 + 1);
}

GroupedRecords group_by_age(std::span<const DensityRecord> records) {
  GroupedRecords groups;
  for (const DensityRecord& r : records) {
    if (r.age < kMinimumAge) {
      fail(ErrorCode::kOutOfRange,
           "subject " + r.subject_id + " has age " + std::to_string(r.age) + ", below " +
               std::to_string(kMinimumAge));
    }
    groups[static_cast<std::size_t>(age_group_index(r.age) - 1)].push_back(r);
  }
  return groups;
}

std::array<GroupAverage, kAgeGroupCount> group_averages(const GroupedRecords& groups) {
  std::array<GroupAverage, kAgeGroupCount> out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double all = 0.0, smoker = 0.0, non_smoker = 0.0;
    GroupAverage& avg = out[g];
    for (const DensityRecord& r : groups[g]) {
      all += r.face_density;
      if (r.smoker) {
        smoker += r.face_density;
        ++avg.smoker_count;
      } else {
        non_smoker += r.face_density;
        ++avg.non_smoker_count;
      }
    }
    if (!groups[g].empty()) avg.overall = all / static_cast<double>(groups[g].size());
    if (avg.smoker_count > 0) avg.smoker = smoker / static_cast<double>(avg.smoker_count);
    if (avg.non_smoker_count > 0) {
      avg.non_smoker = non_smoker / static_cast<double>(avg.non_smoker_count);
    }
  }
  return out;
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
  require(xs.size() == ys.size(), ErrorCode::kInvalidInput,
          "correlation inputs differ in length");
  require(xs.size() >= 2, ErrorCode::kInvalidInput, "correlation needs at least two pairs");
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  require(sxx > 0.0 && syy > 0.0, ErrorCode::kUndefinedCorrelation,
          "correlation is undefined when either variable has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double mann_whitney_p_exact(std::span<const double> a, std::span<const double> b) {
  require_samples(a, b);
  require(!has_ties(a, b), ErrorCode::kInvalidInput, "exact Mann-Whitney needs tie-free samples");
  const std::vector<double> freq = u_frequencies(a.size(), b.size());
  const auto u = static_cast<std::size_t>(u_statistic_lower(a, b));
  double tail = 0.0;
  for (std::size_t k = 0; k <= u; ++k) tail += freq[k];
  const double total = std::accumulate(freq.begin(), freq.end(), 0.0);
  return std::min(1.0, 2.0 * tail / total);
}

double mann_whitney_p_normal(std::span<const double> a, std::span<const double> b) {
  require_samples(a, b);
  const double m = static_cast<double>(a.size());
  const double n = static_cast<double>(b.size());
  const double total = m + n;

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double variance =
      m * n / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
  if (!(variance > 0.0)) return 1.0;

  const double deviation = m * n / 2.0 - u_statistic_lower(a, b);
  const double z = std::max(0.0, deviation - 0.5) / std::sqrt(variance);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

double mann_whitney_p(std::span<const double> a, std::span<const double> b) {
  require_samples(a, b);
  if (std::min(a.size(), b.size()) <= kExactMaxSmallerSample && !has_ties(a, b)) {
    return mann_whitney_p_exact(a, b);
  }
  return mann_whitney_p_normal(a, b);
}

double welch_t_test_p(std::span<const double> a, std::span<const double> b) {
  require_samples(a, b);
  require(a.size() >= 2 && b.size() >= 2, ErrorCode::kInvalidInput,
          "Welch's t-test needs at least two values per sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  double va = 0.0, vb = 0.0;
  for (const double x : a) va += (x - ma) * (x - ma);
  for (const double x : b) vb += (x - mb) * (x - mb);
  va /= na - 1.0;
  vb /= nb - 1.0;

  const double se2 = va / na + vb / nb;
  if (!(se2 > 0.0)) return ma == mb ? 1.0 : 0.0;
  const double t = std::abs(ma - mb) / std::sqrt(se2);
  const double df = se2 * se2 /
                    ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));
  const boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, t)));
}

double two_sample_test(std::span<const double> a, std::span<const double> b,
                       SignificanceTest test) {
  return test == SignificanceTest::kWelch ? welch_t_test_p(a, b) : mann_whitney_p(a, b);
}

CohortReport build_cohort_report(std::span<const DensityRecord> records, SignificanceTest test) {
  CohortReport report;
  report.test = test;
  report.subject_count = records.size();
  report.groups = group_averages(group_by_age(records));

  auto correlate = [&](auto pick) -> std::optional<double> {
    std::vector<double> xs, ys;
    for (std::size_t g = 0; g < report.groups.size(); ++g) {
      if (const std::optional<double> v = pick(report.groups[g])) {
        xs.push_back(age_groups()[g].midpoint);
        ys.push_back(*v);
      }
    }
    try {
      return pearson_correlation(xs, ys);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  report.correlation_overall = correlate([](const GroupAverage& g) { return g.overall; });
  report.correlation_smoker = correlate([](const GroupAverage& g) { return g.smoker; });
  report.correlation_non_smoker = correlate([](const GroupAverage& g) { return g.non_smoker; });

  for (int region = 0; region < kRegionCount; ++region) {
    std::vector<double> smokers, non_smokers;
    for (const DensityRecord& r : records) {
      (r.smoker ? smokers : non_smokers).push_back(r.region_density[static_cast<std::size_t>(region)]);
    }
    RegionComparison& cmp = report.regions[static_cast<std::size_t>(region)];
    if (!smokers.empty()) cmp.mean_smoker = mean_of(smokers);
    if (!non_smokers.empty()) cmp.mean_non_smoker = mean_of(non_smokers);
    try {
      cmp.p_value = two_sample_test(non_smokers, smokers, test);
    } catch (const Error&) {
      cmp.p_value = std::nullopt;
    }
  }
  return report;
}

void write_cohort_report(const std::filesystem::path& dir, const CohortReport& report,
                         std::span<const std::string> failures) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report_groups.csv", std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::kIo, "cannot write report_groups.csv");
    out << "age_group,overall_average_density,smoker_average_density,"
           "non_smoker_average_density,smoker_count,non_smoker_count\n";
    for (std::size_t g = 0; g < report.groups.size(); ++g) {
      const GroupAverage& avg = report.groups[g];
      out << age_groups()[g].label() << ',' << optional_fixed(avg.overall, 2) << ','
          << optional_fixed(avg.smoker, 2) << ',' << optional_fixed(avg.non_smoker, 2) << ','
          << avg.smoker_count << ',' << avg.non_smoker_count << '\n';
    }
  }
  {
    std::ofstream out(dir / "report_regions.csv", std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::kIo, "cannot write report_regions.csv");
    out << "region,name,non_smoker_average_density,smoker_average_density,p_value\n";
    for (int region = 1; region <= kRegionCount; ++region) {
      const RegionComparison& cmp = report.regions[static_cast<std::size_t>(region - 1)];
      out << region << ",\"" << region_name(region) << "\","
          << optional_fixed(cmp.mean_non_smoker, 4) << ',' << optional_fixed(cmp.mean_smoker, 4)
          << ',' << optional_fixed(cmp.p_value, 3) << '\n';
    }
  }
  {
    std::ofstream out(dir / "summary.txt", std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::kIo, "cannot write summary.txt");
    auto show = [](const std::optional<double>& v) { return v ? fixed(*v, 4) : std::string("n/a"); };
    out << "subjects processed: " << report.subject_count << '\n';
    out << "subjects failed: " << failures.size() << '\n';
    out << "significance test: "
        << (report.test == SignificanceTest::kWelch ? "welch" : "mann-whitney") << '\n';
    out << "correlation age vs average density (overall): " << show(report.correlation_overall) << '\n';
    out << "correlation age vs average density (smokers): " << show(report.correlation_smoker) << '\n';
    out << "correlation age vs average density (non-smokers): "
        << show(report.correlation_non_smoker) << '\n';
    for (int region = 1; region <= kRegionCount; ++region) {
      const RegionComparison& cmp = report.regions[static_cast<std::size_t>(region - 1)];
      out << "region " << region << " (" << region_name(region) << "): non-smoker "
          << show(cmp.mean_non_smoker) << ", smoker " << show(cmp.mean_smoker) << ", p "
          << (cmp.p_value ? fixed(*cmp.p_value, 3) : std::string("n/a")) << '\n';
    }
    for (const std::string& f : failures) out << "failed: " << f << '\n';
  }
}

}  // namespace wrinklemap
