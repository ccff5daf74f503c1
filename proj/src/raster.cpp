#include "cabdetect/raster.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>

namespace cabdetect {

std::vector<std::pair<int, int>> mea_quadrant(int rx, int ry) {
  if (rx < 1 || ry < 1) {
    throw std::invalid_argument("mea_quadrant: radii must be >= 1");
  }
  std::vector<std::pair<int, int>> pts;

  const std::int64_t rx2 = static_cast<std::int64_t>(rx) * rx;
  const std::int64_t ry2 = static_cast<std::int64_t>(ry) * ry;
  std::int64_t x = 0;
  std::int64_t y = ry;

  // Region 1 (|slope| < 1), decision parameter scaled by 4 to stay integral.
  std::int64_t p = 4 * ry2 - 4 * rx2 * ry + rx2;
  pts.emplace_back(static_cast<int>(x), static_cast<int>(y));
  while (2 * ry2 * x < 2 * rx2 * y) {
    ++x;
    if (p < 0) {
      p += 4 * (2 * ry2 * x + ry2);
    } else {
      --y;
      p += 4 * (2 * ry2 * x - 2 * rx2 * y + ry2);
    }
    pts.emplace_back(static_cast<int>(x), static_cast<int>(y));
  }

  // Region 2 (|slope| >= 1).
  p = ry2 * (2 * x + 1) * (2 * x + 1) + 4 * rx2 * (y - 1) * (y - 1) -
      4 * rx2 * ry2;
  while (y > 0) {
    --y;
    if (p > 0) {
      p += 4 * (rx2 - 2 * rx2 * y);
    } else {
      ++x;
      p += 4 * (2 * ry2 * x - 2 * rx2 * y + rx2);
    }
    pts.emplace_back(static_cast<int>(x), static_cast<int>(y));
  }
  if (pts.back() != std::make_pair(rx, 0)) {
    pts.emplace_back(rx, 0);
  }
  return pts;
}

TestSet rasterize(const EllipseParams& e, int width, int height) {
  int rx = static_cast<int>(std::lround(e.r_max));
  int ry = static_cast<int>(std::lround(e.r_min));
  if (rx < 1) rx = 1;
  if (ry < 1) ry = 1;

  auto quadrant = mea_quadrant(rx, ry);
  const double ct = std::cos(e.theta);
  const double st = std::sin(e.theta);

  TestSet set;
  std::unordered_set<std::int64_t> seen;
  seen.reserve(quadrant.size() * 4);
  auto emit = [&](double qx, double qy) {
    double px = ct * qx - st * qy + e.x0;
    double py = st * qx + ct * qy + e.y0;
    int ix = static_cast<int>(std::lround(px));
    int iy = static_cast<int>(std::lround(py));
    if (ix < 0 || ix >= width || iy < 0 || iy >= height) return;
    std::int64_t key = (static_cast<std::int64_t>(ix) << 32) |
                       static_cast<std::uint32_t>(iy);
    if (seen.insert(key).second) {
      set.points.emplace_back(ix, iy);
    }
  };

  for (const auto& [qx, qy] : quadrant) {
    // Snap the scan pixel radially onto the exact curve so the rigid motion
    // below introduces no error beyond the final rounding.
    double nx = static_cast<double>(qx) / rx;
    double ny = static_cast<double>(qy) / ry;
    double s = 1.0 / std::sqrt(nx * nx + ny * ny);
    double sx = s * qx;
    double sy = s * qy;
    emit(sx, sy);
    emit(-sx, sy);
    emit(-sx, -sy);
    emit(sx, -sy);
  }
  return set;
}

}  // namespace cabdetect
