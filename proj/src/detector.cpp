#include "cabdetect/detector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cabdetect/raster.hpp"

namespace cabdetect {

namespace {

constexpr double kCircularAxisGap = 1.0;  // px; below this, orientation is moot

std::array<long, 5> rounded_indices(const std::vector<double>& genotype,
                                    std::size_t n_e) {
  std::array<long, 5> idx{};
  for (int i = 0; i < 5; ++i) {
    long v = std::lround(genotype[i]);
    idx[i] = std::clamp(v, 0L, static_cast<long>(n_e) - 1);
  }
  return idx;
}

}  // namespace

DetectorConfig DetectorConfig::resolved(int width, int height) const {
  DetectorConfig out = *this;
  double half = std::min(width, height) / 2.0;
  if (out.r_min_high <= 0.0) out.r_min_high = half;
  if (out.r_max_high <= 0.0) out.r_max_high = half;
  return out;
}

std::optional<EllipseParams> try_decode(const std::vector<double>& genotype,
                                        const EdgePoints& edges,
                                        const DetectorConfig& cfg) {
  auto idx = rounded_indices(genotype, edges.count());
  auto sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    return std::nullopt;
  }

  std::array<Point2, 5> pts;
  for (int i = 0; i < 5; ++i) {
    const auto& [x, y] = edges.points[static_cast<std::size_t>(idx[i])];
    pts[i] = {static_cast<double>(x), static_cast<double>(y)};
  }
  EllipseParams e;
  try {
    e = conic_to_ellipse(fit_conic_five_points(pts));
  } catch (const DegenerateConfiguration&) {
    return std::nullopt;
  } catch (const NotAnEllipse&) {
    return std::nullopt;
  }
  if (e.r_min < cfg.r_min_low || e.r_min > cfg.r_min_high ||
      e.r_max < cfg.r_max_low || e.r_max > cfg.r_max_high) {
    return std::nullopt;
  }
  return e;
}

EllipseParams decode(const std::vector<double>& genotype,
                     const EdgePoints& edges, const DetectorConfig& cfg) {
  if (edges.count() < 5) {
    throw TooFewEdgePixels("decode: fewer than 5 edge pixels");
  }
  auto e = try_decode(genotype, edges, cfg);
  if (!e) {
    throw InvalidCandidate("decode: genotype does not yield a feasible ellipse");
  }
  return *e;
}

double fitness(const EllipseParams& e, const EdgeMap& edges) {
  TestSet set = rasterize(e, edges.width, edges.height);
  if (set.points.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& [x, y] : set.points) {
    if (edges.at(x, y)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(set.points.size());
}

double distinctiveness(const EllipseParams& a, const EllipseParams& b) {
  double d = std::abs(a.x0 - b.x0) + std::abs(a.y0 - b.y0) +
             std::abs(a.r_min - b.r_min) + std::abs(a.r_max - b.r_max);
  bool circular = (a.r_max - a.r_min) < kCircularAxisGap ||
                  (b.r_max - b.r_min) < kCircularAxisGap;
  if (!circular) {
    double dt = std::abs(a.theta - b.theta);
    d += std::min(dt, std::numbers::pi - dt);
  }
  return d;
}

double similarity_threshold(const DetectorConfig& cfg) {
  return (std::abs(cfg.r_max_high - cfg.r_max_low) +
          std::abs(cfg.r_min_high - cfg.r_min_low)) /
         cfg.sensitivity;
}

std::vector<Detection> extract(const std::vector<cab::ScoredPosition>& memory_h,
                               const DetectorConfig& cfg,
                               const EdgePoints& edges,
                               const EdgeMap& edge_map) {
  const double th = similarity_threshold(cfg);
  std::vector<Detection> accepted;
  double cutoff = 0.0;
  for (const auto& element : memory_h) {
    if (!accepted.empty() && element.fitness < cutoff) break;
    auto e = try_decode(element.position, edges, cfg);
    if (!e) continue;
    bool distinct = true;
    for (const auto& d : accepted) {
      if (distinctiveness(*e, d.ellipse) <= th) {
        distinct = false;
        break;
      }
    }
    if (!distinct) continue;
    Detection det;
    det.ellipse = *e;
    det.fitness = element.fitness;
    det.n_s = rasterize(*e, edge_map.width, edge_map.height).count();
    accepted.push_back(det);
    if (accepted.size() == 1) {
      cutoff = accepted.front().fitness / cfg.f_th_divisor;
    }
  }
  return accepted;
}

std::vector<Detection> detect(const EdgeMap& edge_map, const DetectorConfig& cfg,
                              std::uint64_t seed) {
  EdgePoints edges = edge_vector(edge_map);
  if (edges.count() < 5) {
    throw TooFewEdgePixels("detect: fewer than 5 edge pixels");
  }
  DetectorConfig rcfg = cfg.resolved(edge_map.width, edge_map.height);

  cab::Bounds bounds;
  bounds.low.assign(5, 0.0);
  bounds.high.assign(5, static_cast<double>(edges.count() - 1));

  cab::CabConfig cab_cfg = rcfg.cab;
  cab_cfg.rho = similarity_threshold(rcfg);

  auto fitness_fn = [&](const std::vector<double>& genotype) {
    auto e = try_decode(genotype, edges, rcfg);
    return e ? fitness(*e, edge_map) : 0.0;
  };
  // Invalid decodes get distance 0, so they compete purely by fitness.
  auto distance_fn = [&](const std::vector<double>& ga,
                         const std::vector<double>& gb) {
    auto ea = try_decode(ga, edges, rcfg);
    if (!ea) return 0.0;
    auto eb = try_decode(gb, edges, rcfg);
    if (!eb) return 0.0;
    return distinctiveness(*ea, *eb);
  };

  cab::Rng rng(seed);
  auto memory = cab::run(bounds, cab_cfg, fitness_fn, distance_fn, rng);
  return extract(memory, rcfg, edges, edge_map);
}

std::vector<Detection> detect(const GrayImage& img, const CannyConfig& canny_cfg,
                              const DetectorConfig& cfg, std::uint64_t seed) {
  return detect(canny(img, canny_cfg), cfg, seed);
}

}  // namespace cabdetect
