#include "wrinklemap/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "wrinklemap/error.hpp"
#include "wrinklemap/png_io.hpp"
#include "wrinklemap/warp.hpp"

namespace wrinklemap {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool parse_smoker(const std::string& text, bool& value) {
  const std::string t = lower(text);
  if (t == "true" || t == "1" || t == "yes") {
    value = true;
    return true;
  }
  if (t == "false" || t == "0" || t == "no") {
    value = false;
    return true;
  }
  return false;
}

std::string at_line(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

bool safe_subject_id(const std::string& id) {
  if (id.empty() || id == "." || id == "..") return false;
  return id.find_first_of("/\\") == std::string::npos;
}

// Pixels outside the mesh get the mean intensity inside it, so the filter
// does not respond to the artificial mesh border.
GrayImage fill_outside_mesh(const GrayImage& warped, const std::vector<int>& owner) {
  double sum = 0.0;
  std::size_t count = 0;
  auto px = warped.pixels();
  for (std::size_t i = 0; i < owner.size(); ++i) {
    if (owner[i] >= 0) {
      sum += px[i];
      ++count;
    }
  }
  GrayImage filled = warped;
  if (count == 0) return filled;
  const double fill = sum / static_cast<double>(count);
  auto out = filled.pixels();
  for (std::size_t i = 0; i < owner.size(); ++i) {
    if (owner[i] < 0) out[i] = fill;
  }
  return filled;
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open manifest " + path.string());
  const std::filesystem::path base = path.parent_path();

  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_row(line);
    if (!header_seen) {
      const std::vector<std::string> expected = {"subject_id", "image", "landmarks", "age", "smoker"};
      std::vector<std::string> got;
      for (const std::string& f : fields) got.push_back(lower(f));
      require(got == expected, ErrorCode::kParse,
              at_line(path, line_no) + "expected header subject_id,image,landmarks,age,smoker");
      header_seen = true;
      continue;
    }
    require(fields.size() == 5, ErrorCode::kParse,
            at_line(path, line_no) + "expected 5 fields, found " + std::to_string(fields.size()));

    ManifestEntry e;
    e.subject_id = fields[0];
    require(safe_subject_id(e.subject_id), ErrorCode::kParse,
            at_line(path, line_no) + "invalid subject id '" + e.subject_id + "'");
    require(!fields[1].empty() && !fields[2].empty(), ErrorCode::kParse,
            at_line(path, line_no) + "image and landmark paths must not be empty");
    e.image_path = base / fields[1];
    e.landmarks_path = base / fields[2];

    const std::string& age_text = fields[3];
    const auto [end, ec] = std::from_chars(age_text.data(), age_text.data() + age_text.size(), e.age);
    require(ec == std::errc() && end == age_text.data() + age_text.size(), ErrorCode::kParse,
            at_line(path, line_no) + "age '" + age_text + "' is not an integer");
    require(e.age >= kMinimumAge, ErrorCode::kOutOfRange,
            at_line(path, line_no) + "age " + std::to_string(e.age) + " is below " +
                std::to_string(kMinimumAge));
    require(parse_smoker(fields[4], e.smoker), ErrorCode::kParse,
            at_line(path, line_no) + "smoker flag '" + fields[4] + "' is not one of true/false/1/0/yes/no");
    require(seen.insert(e.subject_id).second, ErrorCode::kParse,
            at_line(path, line_no) + "duplicate subject id '" + e.subject_id + "'");
    entries.push_back(std::move(e));
  }
  require(header_seen, ErrorCode::kParse, "manifest " + path.string() + " is empty");
  require(!entries.empty(), ErrorCode::kParse, "manifest " + path.string() + " lists no subjects");
  return entries;
}

void RunConfig::validate() const {
  filter.validate();
  relief.validate();
  require(!output_dir.empty(), ErrorCode::kInvalidInput, "an output directory is required");
  require(!mask_dir.empty(), ErrorCode::kInvalidInput, "a mask directory is required");
}

SubjectResult process_subject(const ManifestEntry& entry, const Shape& mean,
                              const RegionMap& regions, const RunConfig& config) {
  const GrayImage gray = to_grayscale(read_png_rgb(entry.image_path));
  const Shape landmarks = load_landmarks(entry.landmarks_path);
  validate_landmarks(landmarks, gray.width(), gray.height());

  SubjectResult result;
  result.procrustes_distance = procrustes_distance(align_to_mean(landmarks, mean).aligned, mean);

  const int w = regions.width();
  const int h = regions.height();
  const GrayImage warped = piecewise_affine_warp(gray, landmarks, mean, w, h, regions.triangles());
  const std::vector<int> owner = triangle_index_map(mean, regions.triangles(), w, h);
  const WrinkleMap map = combined_wrinkle_map(fill_outside_mesh(warped, owner), config.filter);

  result.record = measure_densities(map, regions, config.filter.response_threshold);
  result.record.subject_id = entry.subject_id;
  result.record.age = entry.age;
  result.record.smoker = entry.smoker;

  const std::filesystem::path dir = config.output_dir / "subjects" / entry.subject_id;
  std::filesystem::create_directories(dir);
  write_png_gray(dir / "warped.png", warped);
  write_png_gray(dir / "wrinkles.png", map.to_intensity());
  write_normal_map(dir / "normal.png", height_to_normal_map(map, config.relief), config.relief);
  return result;
}

Shape registered_mean_shape(const RegionMap& regions, std::span<const Shape> cohort_shapes,
                            const MeanShapeOptions& options) {
  const Shape& canonical = regions.canonical_landmarks();
  if (cohort_shapes.empty()) return canonical;
  MeanShapeOptions frame = options;
  frame.centroid = centroid(canonical);
  frame.size = rms_size(canonical);
  const Shape mean = mean_shape(cohort_shapes, frame);
  Shape registered = align_to_mean(mean, canonical).aligned;
  validate_landmarks(registered, regions.width(), regions.height());
  return registered;
}

RunResult run_pipeline(const std::filesystem::path& manifest, const RunConfig& config) {
  config.validate();
  auto log = [&](const std::string& message) {
    if (config.log) config.log(message);
  };

  const RegionMap regions = load_region_mask(config.mask_dir);
  const std::vector<ManifestEntry> entries = parse_manifest(manifest);
  std::filesystem::create_directories(config.output_dir);

  std::vector<Shape> cohort;
  if (config.recompute_mean) {
    for (const ManifestEntry& e : entries) {
      try {
        cohort.push_back(load_landmarks(e.landmarks_path));
      } catch (const Error& err) {
        log("mean shape: skipping " + e.subject_id + ": " + err.what());
      }
    }
    if (cohort.empty()) log("mean shape: no usable landmark files, using the shipped mean");
  }
  const Shape mean = registered_mean_shape(regions, cohort, config.mean_options);

  RunResult result;
  for (const ManifestEntry& e : entries) {
    try {
      SubjectResult subject = process_subject(e, mean, regions, config);
      result.records.push_back(std::move(subject.record));
    } catch (const std::exception& err) {
      result.failures.push_back(e.subject_id + ": " + err.what());
      log("skipped " + result.failures.back());
    }
  }

  std::sort(result.records.begin(), result.records.end(),
            [](const DensityRecord& a, const DensityRecord& b) { return a.subject_id < b.subject_id; });
  write_density_csv(config.output_dir / "densities.csv", result.records);
  result.report = build_cohort_report(result.records, config.test);
  write_cohort_report(config.output_dir, result.report, result.failures);
  return result;
}

}  // namespace wrinklemap
