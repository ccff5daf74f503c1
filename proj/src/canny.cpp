#include "cabdetect/canny.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cabdetect {

namespace {

inline int clampi(int v, int lo, int hi) { return std::clamp(v, lo, hi); }

std::vector<double> gaussian_kernel_5(double sigma) {
  std::vector<double> k(25);
  double sum = 0.0;
  for (int dy = -2; dy <= 2; ++dy) {
    for (int dx = -2; dx <= 2; ++dx) {
      double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      k[(dy + 2) * 5 + (dx + 2)] = v;
      sum += v;
    }
  }
  for (double& v : k) v /= sum;
  return k;
}

std::vector<double> blur(const GrayImage& img, double sigma) {
  auto k = gaussian_kernel_5(sigma);
  std::vector<double> out(img.data.size());
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int dy = -2; dy <= 2; ++dy) {
        int yy = clampi(y + dy, 0, img.height - 1);
        for (int dx = -2; dx <= 2; ++dx) {
          int xx = clampi(x + dx, 0, img.width - 1);
          acc += k[(dy + 2) * 5 + (dx + 2)] * img.at(xx, yy);
        }
      }
      out[static_cast<std::size_t>(y) * img.width + x] = acc;
    }
  }
  return out;
}

}  // namespace

EdgeMap canny(const GrayImage& img, const CannyConfig& cfg) {
  if (img.width < 5 || img.height < 5) {
    throw std::invalid_argument("canny: image smaller than 5x5");
  }
  if (!cfg.valid()) {
    throw std::invalid_argument("canny: invalid configuration");
  }

  const int w = img.width;
  const int h = img.height;
  std::vector<double> smooth = blur(img, cfg.gaussian_sigma);
  auto s = [&](int x, int y) {
    return smooth[static_cast<std::size_t>(clampi(y, 0, h - 1)) * w +
                  clampi(x, 0, w - 1)];
  };

  std::vector<double> mag(smooth.size(), 0.0);
  std::vector<int> dir(smooth.size(), 0);  // 0:E 1:NE 2:N 3:NW
  double max_mag = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double gx = (s(x + 1, y - 1) + 2 * s(x + 1, y) + s(x + 1, y + 1)) -
                  (s(x - 1, y - 1) + 2 * s(x - 1, y) + s(x - 1, y + 1));
      double gy = (s(x - 1, y + 1) + 2 * s(x, y + 1) + s(x + 1, y + 1)) -
                  (s(x - 1, y - 1) + 2 * s(x, y - 1) + s(x + 1, y - 1));
      double m = std::hypot(gx, gy);
      std::size_t i = static_cast<std::size_t>(y) * w + x;
      mag[i] = m;
      max_mag = std::max(max_mag, m);
      double angle = std::atan2(gy, gx);
      if (angle < 0) angle += std::numbers::pi;
      dir[i] = static_cast<int>(std::floor((angle + std::numbers::pi / 8) /
                                           (std::numbers::pi / 4))) %
               4;
    }
  }

  EdgeMap result(w, h);
  if (max_mag <= 0.0) {
    return result;
  }

  const double low = cfg.low_frac * max_mag;
  const double high = cfg.high_frac * max_mag;
  static const int offs[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};

  // Non-maximum suppression along the gradient direction; the asymmetric
  // comparison keeps exactly one pixel of a tied pair.
  std::vector<std::uint8_t> strong(smooth.size(), 0);
  std::vector<std::uint8_t> weak(smooth.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::size_t i = static_cast<std::size_t>(y) * w + x;
      double m = mag[i];
      if (m < low) continue;
      const int* d = offs[dir[i]];
      double m1 = mag[static_cast<std::size_t>(clampi(y + d[1], 0, h - 1)) * w +
                      clampi(x + d[0], 0, w - 1)];
      double m2 = mag[static_cast<std::size_t>(clampi(y - d[1], 0, h - 1)) * w +
                      clampi(x - d[0], 0, w - 1)];
      if (m > m1 && m >= m2) {
        if (m >= high) {
          strong[i] = 1;
        } else {
          weak[i] = 1;
        }
      }
    }
  }

  // Hysteresis: keep weak pixels 8-connected to a strong pixel.
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (strong[static_cast<std::size_t>(y) * w + x]) {
        result.set(x, y);
        stack.emplace_back(x, y);
      }
    }
  }
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        int nx = x + dx;
        int ny = y + dy;
        if (!result.inside(nx, ny) || result.at(nx, ny)) continue;
        if (weak[static_cast<std::size_t>(ny) * w + nx]) {
          result.set(nx, ny);
          stack.emplace_back(nx, ny);
        }
      }
    }
  }
  return result;
}

}  // namespace cabdetect
