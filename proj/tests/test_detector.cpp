#include <cmath>
#include <numbers>
#include <random>

#include "cabdetect/detector.hpp"
#include "cabdetect/raster.hpp"
#include "cabdetect/synth.hpp"
#include "doctest.h"

using namespace cabdetect;

namespace {

constexpr double kPi = std::numbers::pi;

/// Edge points lying exactly on a rendered ellipse plus the scene context.
struct EllipseScene {
  EdgeMap edges;
  EdgePoints points;
  EllipseParams truth;
};

EllipseScene one_ellipse_scene() {
  synth::SceneSpec spec;
  spec.ellipses.push_back({{200, 150, 80, 40, 0.3}, std::nullopt});
  synth::Scene scene = synth::render(spec);
  return {scene.edges, edge_vector(scene.edges), spec.ellipses[0].params};
}

DetectorConfig default_cfg() {
  DetectorConfig cfg;
  return cfg.resolved(400, 300);
}

}  // namespace

TEST_CASE("decode recovers the ellipse through five of its edge points") {
  EllipseScene scene = one_ellipse_scene();
  DetectorConfig cfg = default_cfg();

  // Five well-spread outline pixels, located in the row-major edge vector.
  TestSet outline = rasterize(scene.truth, 400, 300);
  std::vector<double> genotype;
  for (double frac : {0.0, 0.2, 0.45, 0.65, 0.85}) {
    auto target = outline.points[static_cast<std::size_t>(
        frac * static_cast<double>(outline.count()))];
    for (std::size_t i = 0; i < scene.points.count(); ++i) {
      if (scene.points.points[i] == target) {
        genotype.push_back(static_cast<double>(i));
        break;
      }
    }
  }
  REQUIRE(genotype.size() == 5);
  auto e = try_decode(genotype, scene.points, cfg);
  REQUIRE(e.has_value());
  // The five pixels carry up to half a pixel of rounding noise each, which the
  // exact five-point fit amplifies somewhat; a few pixels of parameter error
  // is the expected scale.
  CHECK(std::abs(e->x0 - scene.truth.x0) < 4.0);
  CHECK(std::abs(e->y0 - scene.truth.y0) < 4.0);
  CHECK(std::abs(e->r_max - scene.truth.r_max) < 4.0);
  CHECK(std::abs(e->r_min - scene.truth.r_min) < 4.0);
}

TEST_CASE("decode rejects repeated indices") {
  EllipseScene scene = one_ellipse_scene();
  DetectorConfig cfg = default_cfg();
  std::vector<double> genotype = {3.0, 3.4, 10.0, 20.0, 30.0};  // 3.4 -> 3
  CHECK_FALSE(try_decode(genotype, scene.points, cfg).has_value());
  CHECK_THROWS_AS(decode(genotype, scene.points, cfg), InvalidCandidate);
}

TEST_CASE("decode rejects collinear edge pixels") {
  EdgeMap edges(50, 50);
  for (int x = 5; x < 45; ++x) edges.set(x, 20);
  EdgePoints pts = edge_vector(edges);
  DetectorConfig cfg = default_cfg();
  std::vector<double> genotype = {0, 5, 11, 23, 35};
  CHECK_FALSE(try_decode(genotype, pts, cfg).has_value());
}

TEST_CASE("decode rejects radii outside the feasible ranges") {
  EllipseScene scene = one_ellipse_scene();
  DetectorConfig cfg = default_cfg();
  cfg.r_max_high = 50.0;  // truth has r_max = 80
  std::size_t n = scene.points.count();
  std::vector<double> genotype = {0.0, n * 0.21, n * 0.42, n * 0.63, n * 0.84};
  CHECK_FALSE(try_decode(genotype, scene.points, cfg).has_value());
}

TEST_CASE("fitness is the matched fraction of the test set") {
  EllipseScene scene = one_ellipse_scene();
  CHECK(fitness(scene.truth, scene.edges) == doctest::Approx(1.0));

  EdgeMap empty(400, 300);
  CHECK(fitness(scene.truth, empty) == 0.0);

  EllipseParams outside{-500, -500, 20, 10, 0};
  CHECK(fitness(outside, scene.edges) == 0.0);  // N_s = 0
}

TEST_CASE("fitness equals the brute-force rasterize-and-count oracle") {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    EdgeMap edges(200, 160);
    for (auto& m : edges.mask) m = u(gen) < 0.08 ? 1 : 0;
    EllipseParams e;
    e.x0 = 200 * u(gen);
    e.y0 = 160 * u(gen);
    e.r_min = 3 + 40 * u(gen);
    e.r_max = e.r_min + 40 * u(gen);
    e.theta = -kPi / 2 + kPi * u(gen);

    TestSet set = rasterize(e, edges.width, edges.height);
    std::size_t hits = 0;
    for (const auto& [x, y] : set.points) {
      if (edges.at(x, y)) ++hits;
    }
    double expected =
        set.points.empty() ? 0.0
                           : static_cast<double>(hits) / set.points.size();
    CHECK(fitness(e, edges) == expected);  // bitwise: both count integers
  }
}

TEST_CASE("distinctiveness examples") {
  EllipseParams a{0, 0, 10, 5, 0};
  CHECK(distinctiveness(a, a) == 0.0);

  EllipseParams shifted{3, 4, 10, 5, 0};
  CHECK(distinctiveness(a, shifted) == doctest::Approx(7.0));

  EllipseParams b{1, 1, 11, 6, 0.1};
  CHECK(distinctiveness(a, b) == doctest::Approx(4.1));
}

TEST_CASE("distinctiveness ignores orientation of near-circular ellipses") {
  EllipseParams a{0, 0, 10, 9.5, 0.0};
  EllipseParams b{0, 0, 10, 9.5, 1.2};
  CHECK(distinctiveness(a, b) == 0.0);
}

TEST_CASE("similarity_threshold substitutions") {
  DetectorConfig cfg;
  cfg.r_max_low = 10;
  cfg.r_max_high = 100;
  cfg.r_min_low = 5;
  cfg.r_min_high = 50;
  cfg.sensitivity = 2.0;
  CHECK(similarity_threshold(cfg) == doctest::Approx(67.5));

  cfg.sensitivity = 4.0;
  CHECK(similarity_threshold(cfg) == doctest::Approx(33.75));

  cfg.r_max_low = cfg.r_max_high = 40;
  cfg.r_min_low = cfg.r_min_high = 20;
  CHECK(similarity_threshold(cfg) == 0.0);
}

TEST_CASE("extract drops duplicates, keeps distinct, applies the cutoff") {
  EllipseScene scene = one_ellipse_scene();
  DetectorConfig cfg = default_cfg();
  std::size_t n = scene.points.count();

  // Two genotypes decoding to (nearly) the same ellipse.
  std::vector<double> g1 = {0.0, n * 0.21, n * 0.42, n * 0.63, n * 0.84};
  std::vector<double> g2 = {n * 0.05, n * 0.27, n * 0.49, n * 0.71, n * 0.93};
  std::vector<cab::ScoredPosition> memory = {{g1, 0.95}, {g2, 0.93}};
  auto dets = extract(memory, cfg, scene.points, scene.edges);
  CHECK(dets.size() == 1);
  CHECK(dets[0].fitness == 0.95);
  CHECK(dets[0].n_s > 0);

  // A low-fitness element below F_1/10 is rejected even when distinct.
  synth::SceneSpec spec2;
  spec2.ellipses.push_back({{200, 150, 80, 40, 0.3}, std::nullopt});
  spec2.ellipses.push_back({{90, 70, 40, 20, -0.5}, std::nullopt});
  synth::Scene scene2 = synth::render(spec2);
  EdgePoints pts2 = edge_vector(scene2.edges);
  // Build genotypes from five well-spread outline pixels of each ellipse.
  auto genotype_on = [&](const EllipseParams& truth) {
    TestSet outline = rasterize(truth, 400, 300);
    std::vector<double> g;
    for (double frac : {0.0, 0.2, 0.45, 0.65, 0.85}) {
      auto target = outline.points[static_cast<std::size_t>(
          frac * static_cast<double>(outline.count()))];
      for (std::size_t i = 0; i < pts2.count(); ++i) {
        if (pts2.points[i] == target) {
          g.push_back(static_cast<double>(i));
          break;
        }
      }
    }
    return g;
  };
  auto ga = genotype_on(spec2.ellipses[0].params);
  auto gb = genotype_on(spec2.ellipses[1].params);
  REQUIRE(ga.size() == 5);
  REQUIRE(gb.size() == 5);

  std::vector<cab::ScoredPosition> mem2 = {{ga, 0.9}, {gb, 0.5}};
  auto dets2 = extract(mem2, cfg, pts2, scene2.edges);
  CHECK(dets2.size() == 2);

  mem2[1].fitness = 0.05;  // below 0.9/10
  auto dets3 = extract(mem2, cfg, pts2, scene2.edges);
  CHECK(dets3.size() == 1);
}

TEST_CASE("extract output is pairwise distinct with non-increasing fitness") {
  EllipseScene scene = one_ellipse_scene();
  DetectorConfig cfg = default_cfg();
  auto dets = detect(scene.edges, cfg, 7);
  double th = similarity_threshold(cfg);
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (i > 0) {
      CHECK(dets[i - 1].fitness >= dets[i].fitness);
      CHECK(dets[i].fitness >= dets[0].fitness / cfg.f_th_divisor);
    }
    CHECK(dets[i].ellipse.r_min >= cfg.r_min_low);
    CHECK(dets[i].ellipse.r_max <= cfg.r_max_high);
    for (std::size_t j = i + 1; j < dets.size(); ++j) {
      CHECK(distinctiveness(dets[i].ellipse, dets[j].ellipse) > th);
    }
  }
}

TEST_CASE("detect finds a clean ellipse") {
  EllipseScene scene = one_ellipse_scene();
  DetectorConfig cfg = default_cfg();
  cfg.cab.iterations = 80;  // plenty for a single clean ellipse

  int good = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto dets = detect(scene.edges, cfg, seed);
    if (dets.empty()) continue;
    const auto& e = dets[0].ellipse;
    if (std::abs(e.x0 - scene.truth.x0) < 2 &&
        std::abs(e.y0 - scene.truth.y0) < 2 &&
        std::abs(e.r_max - scene.truth.r_max) < 3 &&
        std::abs(e.r_min - scene.truth.r_min) < 3) {
      ++good;
    }
  }
  CHECK(good >= 4);
}

TEST_CASE("detect is deterministic for a fixed seed") {
  EllipseScene scene = one_ellipse_scene();
  DetectorConfig cfg = default_cfg();
  cfg.cab.iterations = 30;
  auto a = detect(scene.edges, cfg, 99);
  auto b = detect(scene.edges, cfg, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].ellipse.x0 == b[i].ellipse.x0);
    CHECK(a[i].ellipse.theta == b[i].ellipse.theta);
    CHECK(a[i].fitness == b[i].fitness);
    CHECK(a[i].n_s == b[i].n_s);
  }
}

TEST_CASE("detect rejects edge maps with fewer than 5 pixels") {
  EdgeMap edges(100, 100);
  DetectorConfig cfg;
  CHECK_THROWS_AS(detect(edges, cfg, 1), TooFewEdgePixels);
  edges.set(1, 1);
  edges.set(2, 2);
  edges.set(3, 3);
  edges.set(4, 4);
  CHECK_THROWS_AS(detect(edges, cfg, 1), TooFewEdgePixels);
}
