#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cabdetect/cab.hpp"
#include "cabdetect/canny.hpp"
#include "cabdetect/ellipse.hpp"
#include "cabdetect/image.hpp"

namespace cabdetect {

struct InvalidCandidate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooFewEdgePixels : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DetectorConfig {
  cab::CabConfig cab;
  // Feasible semi-axis ranges. Non-positive highs are replaced by
  // min(width, height)/2 at detection time.
  double r_min_low = 5.0;
  double r_min_high = 0.0;
  double r_max_low = 5.0;
  double r_max_high = 0.0;
  double sensitivity = 2.0;    // s
  double f_th_divisor = 10.0;  // F_TH = F_1 / f_th_divisor

  DetectorConfig resolved(int width, int height) const;
};

struct Detection {
  EllipseParams ellipse;
  double fitness = 0.0;  // matched fraction of the test set
  std::size_t n_s = 0;
};

/// Rounds the five genotype components to edge indices and fits the ellipse
/// through the selected pixels. Returns nullopt for duplicate indices,
/// degenerate fits, non-ellipses and radii outside the feasible ranges.
std::optional<EllipseParams> try_decode(const std::vector<double>& genotype,
                                        const EdgePoints& edges,
                                        const DetectorConfig& cfg);

/// Throwing variant of try_decode.
EllipseParams decode(const std::vector<double>& genotype,
                     const EdgePoints& edges, const DetectorConfig& cfg);

/// Matched fraction F = (edge coincidences of the test set) / N_s.
/// Zero when the test set is empty.
double fitness(const EllipseParams& e, const EdgeMap& edges);

/// L1 mismatch of centers, semi-axes and orientation (angle modulo pi;
/// zero angle term when either ellipse is near-circular).
double distinctiveness(const EllipseParams& a, const EllipseParams& b);

/// Th = (|r_max range| + |r_min range|) / s.
double similarity_threshold(const DetectorConfig& cfg);

/// Walks the memory in descending fitness order and accepts every element
/// that is distinct (> Th) from all accepted ones, stopping at the
/// F_1/f_th_divisor fitness cutoff.
std::vector<Detection> extract(const std::vector<cab::ScoredPosition>& memory_h,
                               const DetectorConfig& cfg,
                               const EdgePoints& edges, const EdgeMap& edge_map);

std::vector<Detection> detect(const EdgeMap& edge_map, const DetectorConfig& cfg,
                              std::uint64_t seed);

std::vector<Detection> detect(const GrayImage& img, const CannyConfig& canny_cfg,
                              const DetectorConfig& cfg, std::uint64_t seed);

}  // namespace cabdetect
