#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "synthetic_face.hpp"
#include "test_util.hpp"
#include "wrinklemap/regions.hpp"
#include "wrinklemap/shape.hpp"

namespace wrinklemap {
namespace {

using testutil::code_of;

Shape noisy(const Shape& base, double amount, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0.0, amount);
  Shape out = base;
  for (Point2& p : out) {
    p.x += n(rng);
    p.y += n(rng);
  }
  return out;
}

double loop_distance(const Shape& a, const Shape& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double dx = a[i].x - b[i].x;
    const double dy = a[i].y - b[i].y;
    d += dx * dx + dy * dy;
  }
  return d;
}

SimilarityTransform make(double scale, double degrees, double tx, double ty) {
  return {scale, degrees * std::numbers::pi / 180.0, tx, ty};
}

TEST(ProcrustesDistance, IdenticalIsZero) {
  const Shape s = canonical_landmarks();
  EXPECT_EQ(procrustes_distance(s, s), 0.0);
}

TEST(ProcrustesDistance, SinglePointOffset) {
  const Shape s = canonical_landmarks();
  Shape t = s;
  t[17].x += 3.0;
  t[17].y += 4.0;
  EXPECT_NEAR(procrustes_distance(t, s), 25.0, 1e-9);
}

TEST(ProcrustesDistance, MatchesLoopSum) {
  const Shape a = noisy(canonical_landmarks(), 5.0, 1);
  const Shape b = noisy(canonical_landmarks(), 5.0, 2);
  EXPECT_NEAR(procrustes_distance(a, b), loop_distance(a, b), 1e-12 * loop_distance(a, b));
  EXPECT_GT(procrustes_distance(a, b), 0.0);
}

TEST(ProcrustesDistance, CountMismatchIsRejected) {
  const Shape s = canonical_landmarks();
  const Shape t(s.begin(), s.end() - 1);
  EXPECT_EQ(code_of([&] { procrustes_distance(t, s); }), ErrorCode::kInvalidInput);
}

TEST(SimilarityTransform, InverseRoundTrips) {
  const SimilarityTransform t = make(1.7, 30.0, 12.0, -5.0);
  const SimilarityTransform inv = t.inverse();
  for (const Point2& p : canonical_landmarks()) {
    const Point2 q = inv.apply(t.apply(p));
    EXPECT_NEAR(q.x, p.x, 1e-9);
    EXPECT_NEAR(q.y, p.y, 1e-9);
  }
}

TEST(AlignToMean, SelfAlignmentIsIdentity) {
  const Shape s = canonical_landmarks();
  const Alignment a = align_to_mean(s, s);
  EXPECT_NEAR(a.transform.scale, 1.0, 1e-12);
  EXPECT_NEAR(a.transform.rotation, 0.0, 1e-12);
  EXPECT_NEAR(a.transform.tx, 0.0, 1e-9);
  EXPECT_NEAR(a.transform.ty, 0.0, 1e-9);
  EXPECT_LT(procrustes_distance(a.aligned, s), 1e-18);
}

TEST(AlignToMean, RecoversForwardTransform) {
  const Shape mean = canonical_landmarks();
  const Shape shape = make(1.7, 30.0, 12.0, -5.0).apply(mean);
  const Alignment a = align_to_mean(shape, mean);
  EXPECT_LT(procrustes_distance(a.aligned, mean), 1e-9);
  EXPECT_NEAR(a.transform.scale, 1.0 / 1.7, 1e-12);
  EXPECT_NEAR(a.transform.rotation, -30.0 * std::numbers::pi / 180.0, 1e-12);
}

TEST(AlignToMean, NoRandomSimilarityDoesBetter) {
  const Shape mean = canonical_landmarks();
  const Shape shape = make(0.8, -12.0, 40.0, 7.0).apply(noisy(mean, 2.0, 3));
  const double best = procrustes_distance(align_to_mean(shape, mean).aligned, mean);
  // Candidates scattered around the optimum, plus wide ones.
  const SimilarityTransform opt = align_to_mean(shape, mean).transform;
  std::mt19937 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double spread = k < 500 ? 0.02 : 0.5;
    const SimilarityTransform t{opt.scale * std::exp(spread * n(rng)), opt.rotation + spread * n(rng),
                                opt.tx + 20.0 * spread * n(rng), opt.ty + 20.0 * spread * n(rng)};
    EXPECT_LE(best, procrustes_distance(t.apply(shape), mean) + 1e-9);
  }
}

TEST(AlignToMean, IsIdempotent) {
  const Shape mean = canonical_landmarks();
  const Shape shape = make(1.3, 21.0, -3.0, 9.0).apply(noisy(mean, 3.0, 5));
  const Alignment once = align_to_mean(shape, mean);
  const Alignment twice = align_to_mean(once.aligned, mean);
  EXPECT_NEAR(twice.transform.scale, 1.0, 1e-9);
  EXPECT_NEAR(twice.transform.rotation, 0.0, 1e-9);
  EXPECT_NEAR(twice.transform.tx, 0.0, 1e-9);
  EXPECT_NEAR(twice.transform.ty, 0.0, 1e-9);
}

TEST(AlignToMean, InvariantToPriorSimilarity) {
  const Shape mean = canonical_landmarks();
  const Shape shape = noisy(mean, 3.0, 6);
  const Shape base = align_to_mean(shape, mean).aligned;
  for (const SimilarityTransform& t : {make(2.0, 90.0, 5.0, 5.0), make(0.3, -170.0, -80.0, 300.0)}) {
    const Shape moved = align_to_mean(t.apply(shape), mean).aligned;
    for (std::size_t i = 0; i < base.size(); ++i) {
      EXPECT_NEAR(moved[i].x, base[i].x, 1e-6);
      EXPECT_NEAR(moved[i].y, base[i].y, 1e-6);
    }
  }
}

TEST(AlignToMean, NeverReflects) {
  const Shape mean = canonical_landmarks();
  Shape mirrored = mean;
  for (Point2& p : mirrored) p.x = -p.x;
  const Alignment a = align_to_mean(mirrored, mean);
  EXPECT_GT(a.transform.scale, 0.0);
  EXPECT_GT(procrustes_distance(a.aligned, mean), 1.0);
}

TEST(AlignToMean, CoincidentPointsAreDegenerate) {
  const Shape mean = canonical_landmarks();
  const Shape flat(kLandmarkCount, Point2{4.0, 4.0});
  EXPECT_EQ(code_of([&] { align_to_mean(flat, mean); }), ErrorCode::kDegenerateShape);
}

TEST(MeanShape, SingleShapeIsCanonicalized) {
  const Shape s = make(1.4, 10.0, 30.0, 40.0).apply(canonical_landmarks());
  const Shape m = mean_shape(std::vector<Shape>{s});
  const Shape expect = canonicalize(s, {0.0, 0.0}, 1.0);
  EXPECT_LT(procrustes_distance(m, expect), 1e-18);
  EXPECT_NEAR(rms_size(m), 1.0, 1e-12);
  EXPECT_NEAR(centroid(m).x, 0.0, 1e-12);
  EXPECT_NEAR(centroid(m).y, 0.0, 1e-12);
}

TEST(MeanShape, IdenticalShapes) {
  const Shape s = canonical_landmarks();
  const Shape m = mean_shape(std::vector<Shape>(5, s));
  EXPECT_LT(procrustes_distance(m, canonicalize(s, {0.0, 0.0}, 1.0)), 1e-18);
}

TEST(MeanShape, SimilarShapesShareTheMean) {
  const Shape s = canonical_landmarks();
  const std::vector<Shape> shapes{s, make(0.6, 50.0, -20.0, 3.0).apply(s)};
  const Shape m = mean_shape(shapes);
  for (const Shape& x : shapes) EXPECT_LT(procrustes_distance(align_to_mean(x, m).aligned, m), 1e-9);
}

TEST(MeanShape, HonoursRequestedFrame) {
  MeanShapeOptions o;
  o.centroid = {128.0, 160.0};
  o.size = 70.0;
  const std::vector<Shape> shapes{noisy(canonical_landmarks(), 2.0, 7), noisy(canonical_landmarks(), 2.0, 8)};
  const Shape m = mean_shape(shapes, o);
  EXPECT_NEAR(centroid(m).x, 128.0, 1e-9);
  EXPECT_NEAR(centroid(m).y, 160.0, 1e-9);
  EXPECT_NEAR(rms_size(m), 70.0, 1e-9);
}

TEST(MeanShape, EmptyListIsRejected) {
  EXPECT_EQ(code_of([] { mean_shape(std::vector<Shape>{}); }), ErrorCode::kInvalidInput);
}

TEST(ValidateLandmarks, ChecksCountFinitenessAndBounds) {
  const Shape s = canonical_landmarks();
  EXPECT_NO_THROW(validate_landmarks(s, 256, 320));
  EXPECT_EQ(code_of([&] { validate_landmarks(Shape(s.begin(), s.begin() + 68)); }), ErrorCode::kInvalidInput);
  Shape bad = s;
  bad[3].y = std::nan("");
  EXPECT_EQ(code_of([&] { validate_landmarks(bad); }), ErrorCode::kInvalidInput);
  EXPECT_EQ(code_of([&] { validate_landmarks(s, 100, 100); }), ErrorCode::kInvalidInput);
}

TEST(LandmarkFile, RoundTrips) {
  const auto dir = synth::scratch_dir("landmarks");
  const Shape s = noisy(canonical_landmarks(), 1.0, 9);
  save_landmarks(dir / "s.json", s);
  const Shape back = load_landmarks(dir / "s.json");
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_DOUBLE_EQ(back[i].x, s[i].x);
    EXPECT_DOUBLE_EQ(back[i].y, s[i].y);
  }
}

TEST(LandmarkFile, ErrorsAreClassified) {
  const auto dir = synth::scratch_dir("landmarks_bad");
  EXPECT_EQ(code_of([&] { load_landmarks(dir / "missing.json"); }), ErrorCode::kIo);
  std::ofstream(dir / "garbage.json") << "[[1, 2], [3";
  EXPECT_EQ(code_of([&] { load_landmarks(dir / "garbage.json"); }), ErrorCode::kParse);
  std::ofstream(dir / "short.json") << "[[1, 2], [3, 4]]";
  EXPECT_EQ(code_of([&] { load_landmarks(dir / "short.json"); }), ErrorCode::kInvalidInput);
  std::ofstream(dir / "shape.json") << "{\"x\": 1}";
  EXPECT_NE(code_of([&] { load_landmarks(dir / "shape.json"); }), ErrorCode::kIo);
}

}  // namespace
}  // namespace wrinklemap
