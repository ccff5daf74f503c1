#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cabdetect {

struct ImageIoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 8-bit grayscale raster, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  bool inside(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
};

/// Binary edge raster, row-major.
struct EdgeMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> mask;  // 0 or 1

  EdgeMap() = default;
  EdgeMap(int w, int h) : width(w), height(h), mask(static_cast<std::size_t>(w) * h, 0) {}

  bool at(int x, int y) const {
    return mask[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool v = true) {
    mask[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  bool inside(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
};

/// Ordered edge-pixel list (row-major scan order: y ascending, then x).
struct EdgePoints {
  std::vector<std::pair<int, int>> points;

  std::size_t count() const { return points.size(); }
};

GrayImage load_gray(const std::string& path);
void save_gray(const GrayImage& img, const std::string& path, bool binary = true);

EdgeMap load_edge_map(const std::string& path);
void save_edge_map(const EdgeMap& edges, const std::string& path, bool binary = true);

/// RGB overlay output (P6).
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 3 bytes per pixel, row-major

  RgbImage() = default;
  explicit RgbImage(const GrayImage& g);
  void set(int x, int y, std::uint8_t r, std::uint8_t gg, std::uint8_t b) {
    std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
    data[i] = r;
    data[i + 1] = gg;
    data[i + 2] = b;
  }
};

void save_rgb(const RgbImage& img, const std::string& path);

EdgePoints edge_vector(const EdgeMap& edges);

}  // namespace cabdetect
