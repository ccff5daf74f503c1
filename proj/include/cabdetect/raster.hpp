#pragma once

#include <utility>
#include <vector>

#include "cabdetect/ellipse.hpp"

namespace cabdetect {

/// Pixel set on a candidate ellipse's perimeter, deduplicated and clipped to
/// the image plane.
struct TestSet {
  std::vector<std::pair<int, int>> points;

  std::size_t count() const { return points.size(); }
};

/// First-quadrant boundary of the axis-aligned ellipse x^2/rx^2 + y^2/ry^2 = 1
/// by the two-region midpoint scheme. Integer decision arithmetic only.
/// Includes (rx,0) and (0,ry). Throws std::invalid_argument for radii < 1.
std::vector<std::pair<int, int>> mea_quadrant(int rx, int ry);

/// Reflects the quadrant to all four, rotates by theta about the center,
/// rounds, deduplicates (first occurrence wins) and clips to width x height.
TestSet rasterize(const EllipseParams& e, int width, int height);

}  // namespace cabdetect
