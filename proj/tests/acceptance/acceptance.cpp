// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "synthetic_face.hpp"
#include "wrinklemap/cohort.hpp"
#include "wrinklemap/hhf.hpp"
#include "wrinklemap/image.hpp"
#include "wrinklemap/regions.hpp"
#include "wrinklemap/relief.hpp"
#include "wrinklemap/shape.hpp"
#include "wrinklemap/warp.hpp"
#include "wrinklemap/wrinklemap.h"

namespace fs = std::filesystem;
using namespace wrinklemap;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

const fs::path kMaskDir = WRINKLEMAP_ASSET_DIR;

// ---- 1 ---------------------------------------------------------------------

Outcome analytic_hessian() {
  Outcome o;
  const int n = 64;
  auto field = [&](auto f) {
    GrayImage img(n, n);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) img.at(x, y) = f(double(x), double(y));
    return hessian_field(img, 0.0);
  };
  // Expected (d2/dy2, d2/dxdy, d2/dx2) for each field.
  struct Case {
    const char* name;
    std::function<double(double, double)> f;
    double ha, hb, hc;
  };
  const std::vector<Case> cases = {
      {"x^2", [](double x, double) { return x * x; }, 0.0, 0.0, 2.0},
      {"y^2", [](double, double y) { return y * y; }, 2.0, 0.0, 0.0},
      {"xy", [](double x, double y) { return x * y; }, 0.0, 1.0, 0.0},
  };
  double worst = 0.0;
  for (const Case& c : cases) {
    const HessianField h = field(c.f);
    double err = 0.0;
    for (int y = 2; y < n - 2; ++y) {
      for (int x = 2; x < n - 2; ++x) {
        err = std::max({err, std::abs(h.ha.at(x, y) - c.ha), std::abs(h.hb.at(x, y) - c.hb),
                        std::abs(h.hc.at(x, y) - c.hc)});
      }
    }
    o.check(err <= 1e-6, std::string(c.name) + " max error " + fmt("%.3g", err));
    worst = std::max(worst, err);
  }
  if (o.pass) o.detail = "max interior error " + fmt("%.3g", worst);
  return o;
}

// ---- 2 ---------------------------------------------------------------------

GrayImage furrow_image(int size, int row) {
  GrayImage img(size, size);
  for (int y = 0; y < size; ++y) {
    const double d = y - row;
    const double v = 180.0 - 80.0 * std::exp(-d * d / (2.0 * 1.5 * 1.5));
    for (int x = 0; x < size; ++x) img.at(x, y) = v;
  }
  return img;
}

double energy(const GrayImage& img) {
  double e = 0.0;
  for (double v : img.pixels()) e += v * v;
  return e;
}

double max_abs_diff(const GrayImage& a, const GrayImage& b) {
  if (!a.same_shape(b)) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.pixels()[i] - b.pixels()[i]));
  return m;
}

Outcome orientation_selectivity() {
  Outcome o;
  const int size = 256;
  const int row = 128;
  const GrayImage img = furrow_image(size, row);
  const FilterParams params;

  const double eh = energy(raw_hhf_response(img, Orientation::kHorizontal, params.sigma));
  const double ev = energy(raw_hhf_response(img, Orientation::kVertical, params.sigma));
  o.check(eh >= 5.0 * ev, "energy ratio " + fmt("%.3g", eh / ev));

  const WrinkleMap h = hhf_response(img, Orientation::kHorizontal, params);
  int hits = 0;
  int columns = 0;
  for (int x = 8; x < size - 8; ++x) {
    int best = 0;
    for (int y = 1; y < size; ++y) {
      if (h.at(x, y) > h.at(x, best)) best = y;
    }
    ++columns;
    hits += best == row;
  }
  const double frac = double(hits) / columns;
  o.check(frac >= 0.95, "row-argmax on furrow in " + fmt("%.3f", frac) + " of columns");

  // Rotating the input swaps the orientations; check on the furrow and on noise.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  GrayImage noise(96, 96);
  for (double& v : noise.pixels()) v = u(rng);
  double eq = 0.0;
  for (const GrayImage* src : {&img, static_cast<const GrayImage*>(&noise)}) {
    const GrayImage rot = rotate90(*src);
    const auto hs = hhf_response(*src, Orientation::kHorizontal, params).image();
    const auto vs = hhf_response(*src, Orientation::kVertical, params).image();
    const auto hr = hhf_response(rot, Orientation::kHorizontal, params).image();
    const auto vr = hhf_response(rot, Orientation::kVertical, params).image();
    eq = std::max({eq, max_abs_diff(vr, rotate90(hs)), max_abs_diff(hr, rotate90(vs))});
  }
  o.check(eq <= 1e-6, "rotation equivariance error " + fmt("%.3g", eq));
  if (o.pass) {
    o.detail = "energy ratio " + (ev > 0 ? fmt("%.3g", eh / ev) : std::string("inf")) +
               ", argmax hit rate " + fmt("%.3f", frac) + ", equivariance error " + fmt("%.2g", eq);
  }
  return o;
}

// ---- 3 ---------------------------------------------------------------------

SimilarityTransform random_similarity(std::mt19937& rng) {
  std::uniform_real_distribution<double> s(0.3, 3.0);
  std::uniform_real_distribution<double> r(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> t(-200.0, 200.0);
  return {s(rng), r(rng), t(rng), t(rng)};
}

Outcome procrustes_suite() {
  Outcome o;
  const Shape mean = canonical_landmarks();
  const double self = procrustes_distance(align_to_mean(mean, mean).aligned, mean);
  o.check(self <= 1e-18, "D(shape, shape) = " + fmt("%.3g", self));

  const SimilarityTransform known{1.7, 30.0 * std::numbers::pi / 180.0, 12.0, -5.0};
  const Alignment rec = align_to_mean(known.apply(mean), mean);
  const double d = procrustes_distance(rec.aligned, mean);
  o.check(d < 1e-9, "recovered D = " + fmt("%.3g", d));
  o.check(std::abs(rec.transform.scale * 1.7 - 1.0) < 1e-9 &&
              std::abs(rec.transform.rotation + known.rotation) < 1e-9,
          "recovered transform is not the inverse of the applied one");

  std::mt19937 rng(11);
  std::normal_distribution<double> jitter(0.0, 3.0);
  Shape shape = mean;
  for (Point2& p : shape) {
    p.x += jitter(rng);
    p.y += jitter(rng);
  }
  const Shape reference = align_to_mean(shape, mean).aligned;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Shape moved = random_similarity(rng).apply(shape);
    const Shape aligned = align_to_mean(moved, mean).aligned;
    for (std::size_t i = 0; i < aligned.size(); ++i) {
      worst = std::max({worst, std::abs(aligned[i].x - reference[i].x),
                        std::abs(aligned[i].y - reference[i].y)});
    }
  }
  o.check(worst <= 1e-6, "invariance error " + fmt("%.3g", worst));
  if (o.pass) o.detail = "recovered D " + fmt("%.2g", d) + ", invariance error " + fmt("%.2g", worst);
  return o;
}

// ---- 4 ---------------------------------------------------------------------

Outcome warp_suite() {
  Outcome o;
  const RegionMap regions = load_region_mask(kMaskDir);
  const Shape& lm = regions.canonical_landmarks();
  const int w = regions.width();
  const int h = regions.height();
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> byte(0, 255);

  GrayImage noise(w, h);
  for (double& v : noise.pixels()) v = byte(rng);
  const GrayImage same = piecewise_affine_warp(noise, lm, lm, w, h, regions.triangles());
  const std::vector<int> owner = triangle_index_map(lm, regions.triangles(), w, h);
  std::size_t inside = 0;
  std::size_t mismatched = 0;
  for (std::size_t i = 0; i < owner.size(); ++i) {
    if (owner[i] < 0) continue;
    ++inside;
    mismatched += same.pixels()[i] != noise.pixels()[i];
  }
  o.check(inside > 0 && mismatched == 0,
          "identity warp differs at " + std::to_string(mismatched) + " of " + std::to_string(inside) +
              " hull pixels");

  // Smooth analytic texture moved by a sub-pixel translation.
  auto texture = [](double x, double y) {
    return 128.0 + 60.0 * std::sin(2.0 * std::numbers::pi * x / 32.0) +
           40.0 * std::cos(2.0 * std::numbers::pi * (x + 2.0 * y) / 40.0);
  };
  const double tx = 3.4;
  const double ty = -2.7;
  GrayImage src_img(w + 16, h + 16);
  for (int y = 0; y < src_img.height(); ++y)
    for (int x = 0; x < src_img.width(); ++x) src_img.at(x, y) = texture(x, y);
  Shape moved = lm;
  for (Point2& p : moved) p = {p.x + tx, p.y + ty};
  const GrayImage shifted = piecewise_affine_warp(src_img, moved, lm, w, h, regions.triangles());
  double terr = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (owner[static_cast<std::size_t>(y) * w + x] < 0) continue;
      terr = std::max(terr, std::abs(shifted.at(x, y) - texture(x + tx, y + ty)));
    }
  }
  o.check(terr <= 1.0, "translation max error " + fmt("%.3g", terr));

  // Integer landmarks related by a quarter turn: every vertex pixel must be copied exactly.
  Shape dst(lm.size());
  for (std::size_t i = 0; i < lm.size(); ++i) dst[i] = {std::round(lm[i].x), std::round(lm[i].y)};
  Shape src(dst.size());
  for (std::size_t i = 0; i < dst.size(); ++i) src[i] = {dst[i].y, double(w - 1) - dst[i].x};
  GrayImage turned(h, w);
  for (double& v : turned.pixels()) v = byte(rng);
  const GrayImage vw = piecewise_affine_warp(turned, src, dst, w, h);
  int vertex_bad = 0;
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double got = vw.at(int(dst[i].x), int(dst[i].y));
    const double want = turned.at(int(src[i].x), int(src[i].y));
    vertex_bad += got != want;
  }
  o.check(vertex_bad == 0, std::to_string(vertex_bad) + " of 88 vertices not exact");
  if (o.pass) {
    o.detail = std::to_string(inside) + " hull pixels identical, translation error " +
               fmt("%.3g", terr) + ", 88/88 vertices exact";
  }
  return o;
}

// ---- 5 ---------------------------------------------------------------------

Outcome density_oracle() {
  Outcome o;
  const RegionMap regions = load_region_mask(kMaskDir);
  const int w = regions.width();
  const int h = regions.height();
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  // Independent label read-back from the asset's pixel grid.
  std::size_t area = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) area += regions.label(x, y) != 0;

  int exact_fail = 0;
  double add_err = 0.0;
  int mono_fail = 0;
  for (int trial = 0; trial < 100; ++trial) {
    GrayImage img(w, h);
    // Mix uniform noise with exact threshold hits to exercise the >= boundary.
    for (double& v : img.pixels()) v = u(rng) < 0.05 ? 0.5 : u(rng);
    const WrinkleMap map(img);
    const double threshold = trial % 10 == 0 ? 0.5 : u(rng);

    double sum = 0.0;
    for (int id = 1; id <= kRegionCount; ++id) {
      std::size_t count = 0;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) count += regions.label(x, y) == id && img.at(x, y) >= threshold;
      const double expect = 1e4 * double(count) / double(area);
      const double got = region_density(map, regions, id, threshold);
      exact_fail += got != expect;
      sum += got;
    }
    add_err = std::max(add_err, std::abs(face_density(map, regions, threshold) - sum));

    double prev = INFINITY;
    for (int step = 0; step < 20; ++step) {
      const double t = step / 19.0;
      const double f = face_density(map, regions, t);
      mono_fail += f > prev;
      prev = f;
    }
  }
  o.check(exact_fail == 0, std::to_string(exact_fail) + " region densities differ from brute force");
  o.check(add_err <= 1e-9, "additivity error " + fmt("%.3g", add_err));
  o.check(mono_fail == 0, std::to_string(mono_fail) + " monotonicity violations");
  if (o.pass) o.detail = "1000 region densities exact, additivity error " + fmt("%.2g", add_err);
  return o;
}

// ---- 6 ---------------------------------------------------------------------

// Two-sided exact p by enumerating every split of the pooled sample.
double enumerated_mw_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = pooled.size();
  const std::size_t m = a.size();
  auto u_stat = [&](const std::vector<bool>& pick) {
    double u = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!pick[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (pick[j]) continue;
        u += pooled[i] < pooled[j] ? 1.0 : (pooled[i] == pooled[j] ? 0.5 : 0.0);
      }
    }
    return u;
  };
  std::vector<bool> observed(n, false);
  std::fill(observed.begin(), observed.begin() + static_cast<long>(m), true);
  const double mn = double(m) * double(n - m);
  const double u0 = u_stat(observed);
  const double dev = std::abs(u0 - mn / 2.0);
  std::vector<bool> pick(n, false);
  std::fill(pick.end() - static_cast<long>(m), pick.end(), true);
  double extreme = 0.0;
  double total = 0.0;
  do {
    total += 1.0;
    extreme += std::abs(u_stat(pick) - mn / 2.0) >= dev - 1e-12;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return extreme / total;
}

Outcome statistics_oracles() {
  Outcome o;
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-50.0, 50.0);

  std::vector<double> xs(30);
  std::vector<double> ys(30);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = u(rng);
    ys[i] = 2.5 * xs[i] - 7.0;
  }
  const double r = pearson_correlation(xs, ys);
  o.check(std::abs(r - 1.0) <= 1e-12, "linear r = " + fmt("%.17g", r));

  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{4, 5, 6};
  const double p1 = mann_whitney_p(a, b);
  const double e1 = enumerated_mw_p(a, b);
  o.check(p1 == e1 && p1 == 0.1, "p({1,2,3},{4,5,6}) = " + fmt("%.17g", p1) + ", enumerated " +
                                     fmt("%.17g", e1));

  std::vector<double> lo(8);
  std::vector<double> hi(8);
  for (int i = 0; i < 8; ++i) {
    lo[i] = i + 1;
    hi[i] = i + 101;
  }
  const double p2 = mann_whitney_p(lo, hi);
  o.check(std::abs(p2 - 2.0 / 12870.0) <= 1e-12, "p(1..8, 101..108) = " + fmt("%.17g", p2));

  std::uniform_int_distribution<int> size(3, 14);
  int sym_fail = 0;
  int mono_fail = 0;
  for (int k = 0; k < 50; ++k) {
    std::vector<double> s(static_cast<std::size_t>(size(rng)));
    std::vector<double> t(static_cast<std::size_t>(size(rng)));
    for (double& v : s) v = u(rng);
    for (double& v : t) v = u(rng) + 10.0;
    const double p = mann_whitney_p(s, t);
    sym_fail += std::abs(p - mann_whitney_p(t, s)) > 1e-12;
    auto f = [](double v) { return std::exp(v / 20.0) + v * v * v; };
    std::vector<double> fs(s);
    std::vector<double> ft(t);
    std::transform(fs.begin(), fs.end(), fs.begin(), f);
    std::transform(ft.begin(), ft.end(), ft.begin(), f);
    mono_fail += std::abs(p - mann_whitney_p(fs, ft)) > 1e-12;
  }
  o.check(sym_fail == 0, std::to_string(sym_fail) + " symmetry failures");
  o.check(mono_fail == 0, std::to_string(mono_fail) + " monotone-transform failures");
  if (o.pass) o.detail = "r-1 = " + fmt("%.2g", r - 1.0) + ", p = 0.1 and 2/12870 reproduced";
  return o;
}

// ---- 7 ---------------------------------------------------------------------

Outcome normal_map_suite() {
  Outcome o;
  const ReliefParams params;
  const RgbImage flat = height_to_normal_map(GrayImage(64, 48, 0.7), params);
  bool flat_ok = true;
  for (int y = 0; y < flat.height(); ++y)
    for (int x = 0; x < flat.width(); ++x)
      flat_ok = flat_ok && flat.at(x, y, 0) == 128 && flat.at(x, y, 1) == 128 && flat.at(x, y, 2) == 255;
  o.check(flat_ok, "flat input is not (128,128,255) everywhere");

  const double a = 0.9;
  const double b = -0.4;
  GrayImage ramp(64, 48);
  for (int y = 0; y < ramp.height(); ++y)
    for (int x = 0; x < ramp.width(); ++x) ramp.at(x, y) = a * x + b * y;
  const RgbImage rn = height_to_normal_map(ramp, params);
  const double g = params.weight * params.intensity_scale;
  const double len = std::sqrt(g * a * g * a + g * b * g * b + 1.0);
  const double expect[3] = {-g * a / len, -g * b / len, 1.0 / len};
  int ramp_err = 0;
  for (int y = 0; y < rn.height(); ++y) {
    for (int x = 0; x < rn.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        ramp_err = std::max(ramp_err, std::abs(int(rn.at(x, y, c)) - int(std::lround(127.5 * (expect[c] + 1.0)))));
      }
    }
  }
  o.check(ramp_err <= 1, "ramp channel error " + std::to_string(ramp_err));

  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GrayImage rough(80, 80);
  for (double& v : rough.pixels()) v = u(rng);
  const RgbImage nr = height_to_normal_map(WrinkleMap(rough), {-4.0, 1.0});
  const double tol = std::sqrt(3.0) * 0.5 / 127.5 + 1e-12;
  double worst = 0.0;
  for (const RgbImage* img : {&flat, &rn, &nr}) {
    for (int y = 0; y < img->height(); ++y) {
      for (int x = 0; x < img->width(); ++x) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c) {
          const double n = img->at(x, y, c) / 127.5 - 1.0;
          s += n * n;
        }
        worst = std::max(worst, std::abs(std::sqrt(s) - 1.0));
      }
    }
  }
  o.check(worst <= tol, "decoded length error " + fmt("%.4g", worst));
  if (o.pass) {
    o.detail = "ramp channel error " + std::to_string(ramp_err) + ", length error " + fmt("%.4f", worst) +
               " (bound " + fmt("%.4f", tol) + ")";
  }
  return o;
}

// ---- 8 / 9 -----------------------------------------------------------------

struct CohortRun {
  fs::path cohort;
  fs::path out;
  wm_status status = WM_ERR_INTERNAL;
  wm_run_result* result = nullptr;
};

CohortRun run_cohort(const std::string& tag) {
  CohortRun run;
  const RegionMap regions = load_region_mask(kMaskDir);
  run.cohort = synth::scratch_dir("cohort_" + tag);
  run.out = synth::scratch_dir("out_" + tag);
  const fs::path manifest = synth::write_cohort(run.cohort, regions.canonical_landmarks());
  const std::string manifest_s = manifest.string();
  const std::string mask_s = kMaskDir.string();
  const std::string out_s = run.out.string();
  wm_run_config config;
  wm_run_config_init(&config);
  config.manifest_path = manifest_s.c_str();
  config.mask_dir = mask_s.c_str();
  config.output_dir = out_s.c_str();
  run.status = wm_run_pipeline(&config, &run.result);
  return run;
}

Outcome synthetic_cohort(CohortRun& run) {
  Outcome o;
  run = run_cohort("a");
  if (run.status != WM_OK) {
    o.check(false, std::string("pipeline failed: ") + wm_last_error());
    return o;
  }
  o.check(wm_run_result_succeeded(run.result) == 40 && wm_run_result_failed(run.result) == 0,
          std::to_string(wm_run_result_succeeded(run.result)) + " of 40 subjects processed");
  std::string ps;
  for (int id = 1; id <= kRegionCount; ++id) {
    double ns = NAN;
    double sm = NAN;
    double p = NAN;
    wm_run_result_region(run.result, id, &ns, &sm, &p);
    ps += (id > 1 ? " " : "") + std::string("r") + std::to_string(id) + "=" + fmt("%.3f", p);
    if (id == 7 || id == 8) {
      o.check(p < 0.05 && sm > ns, "region " + std::to_string(id) + " p " + fmt("%.4f", p) +
                                       " smoker " + fmt("%.1f", sm) + " non-smoker " + fmt("%.1f", ns));
    } else {
      o.check(p > 0.05, "region " + std::to_string(id) + " p " + fmt("%.4f", p));
    }
  }
  const double r = wm_run_result_correlation(run.result, 0);
  o.check(r > 0.8, "age correlation " + fmt("%.4f", r));
  o.detail = (o.pass ? "" : o.detail + " | ") + "p: " + ps + ", age r " + fmt("%.4f", r);
  return o;
}

Outcome determinism(const CohortRun& first) {
  Outcome o;
  if (first.status != WM_OK) {
    o.check(false, "first run did not complete");
    return o;
  }
  CohortRun second = run_cohort("b");
  if (second.status != WM_OK) {
    o.check(false, std::string("second run failed: ") + wm_last_error());
    return o;
  }
  std::size_t compared = 0;
  std::size_t differing = 0;
  for (const auto& [base_a, base_b] : {std::pair{first.cohort, second.cohort}, std::pair{first.out, second.out}}) {
    for (const auto& entry : fs::recursive_directory_iterator(base_a)) {
      const auto ext = entry.path().extension();
      if (!entry.is_regular_file() || (ext != ".csv" && ext != ".png")) continue;
      const fs::path rel = fs::relative(entry.path(), base_a);
      // The manifest embeds nothing run-specific, so it must match too.
      ++compared;
      if (!synth::same_bytes(entry.path(), base_b / rel)) {
        ++differing;
        if (differing <= 3) o.check(false, rel.string() + " differs");
      }
    }
  }
  o.check(compared > 0, "no files compared");
  o.check(differing == 0, std::to_string(differing) + " files differ");
  if (o.pass) o.detail = std::to_string(compared) + " CSV/PNG files byte-identical";
  wm_run_result_free(second.result);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  CohortRun cohort;
  const std::vector<Criterion> criteria = {
      {1, "filter correctness on analytic fields", 1.0, analytic_hessian},
      {2, "orientation selectivity", 2.0, orientation_selectivity},
      {3, "procrustes suite", 1.0, procrustes_suite},
      {4, "warp suite", 2.0, warp_suite},
      {5, "density oracle", 5.0, density_oracle},
      {6, "statistics oracles", 5.0, statistics_oracles},
      {7, "normal-map suite", 1.0, normal_map_suite},
      {8, "synthetic-cohort end-to-end", 60.0, [&] { return synthetic_cohort(cohort); }},
      {9, "determinism", 60.0, [&] { return determinism(cohort); }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs < c.budget_s, "runtime " + fmt("%.2f", secs) + " s over budget " + fmt("%.0f", c.budget_s) + " s");
    std::printf("criterion %d %s: %s (%.2f s) %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", secs,
                o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  wm_run_result_free(cohort.result);
  return failures == 0 ? 0 : 1;
}
