#pragma once

#include "cabdetect/image.hpp"

namespace cabdetect {

struct CannyConfig {
  double gaussian_sigma = 1.4;   // 5x5 kernel
  double low_frac = 0.1;         // fraction of max gradient magnitude
  double high_frac = 0.3;

  bool valid() const {
    return gaussian_sigma > 0.0 && low_frac > 0.0 && high_frac < 1.0 &&
           low_frac < high_frac;
  }
};

/// Canny edge detection: Gaussian blur, Sobel gradients, non-maximum
/// suppression with 4-bin direction quantization, hysteresis with
/// 8-connected weak-edge tracking. Requires at least a 5x5 image.
EdgeMap canny(const GrayImage& img, const CannyConfig& cfg = {});

}  // namespace cabdetect
