#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cabdetect/cab.hpp"
#include "cabdetect/ellipse.hpp"
#include "cabdetect/image.hpp"

namespace cabdetect::synth {

struct SceneError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Distractor {
  enum class Kind { Rectangle, Triangle, Segment };
  Kind kind = Kind::Segment;
  // Rectangle: two opposite corners. Triangle: three vertices.
  // Segment: two endpoints.
  std::vector<std::pair<double, double>> vertices;
};

struct SceneEllipse {
  EllipseParams params;
  /// Parametric arc gap [t_start, t_end) omitted from the outline.
  std::optional<std::pair<double, double>> occlusion;
};

struct SceneSpec {
  int width = 400;
  int height = 300;
  std::vector<SceneEllipse> ellipses;
  std::vector<Distractor> distractors;
  double noise_density = 0.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws SceneError
};

struct GroundTruth {
  std::vector<EllipseParams> ellipses;
};

struct Scene {
  GrayImage image;  // white outlines on black
  EdgeMap edges;    // exact outline raster
  GroundTruth truth;
};

/// Renders outlines into both rasters. Noise is not applied here; use
/// add_salt_pepper with the spec's seed.
Scene render(const SceneSpec& spec);

void add_salt_pepper(GrayImage& img, double density, cab::Rng& rng);
void add_salt_pepper(EdgeMap& edges, double density, cab::Rng& rng);

SceneSpec parse_scene_spec(const std::string& json_text);
SceneSpec load_scene_spec(const std::string& path);

std::string ground_truth_to_json(const GroundTruth& truth);
GroundTruth load_ground_truth(const std::string& path);

}  // namespace cabdetect::synth
