#pragma once

#include <vector>

#include "cabdetect/detector.hpp"
#include "cabdetect/ellipse.hpp"
#include "cabdetect/synth.hpp"

namespace cabdetect::eval {

struct EvalWeights {
  double p1 = 0.05;  // center shift
  double p2 = 0.1;   // averaged radius mismatch
  double p3 = 0.2;   // orientation mismatch, degrees
};

struct RunReport {
  std::vector<double> es;
  double me = 0.0;
  bool success = false;  // me < 1
  double runtime_s = 0.0;
};

/// Weighted error score between a ground-truth ellipse and a detection.
/// The angle term is in degrees modulo 180 and drops out when both ellipses
/// are near-circular (axis ratio > 0.99).
double error_score(const EllipseParams& truth, const EllipseParams& det,
                   const EvalWeights& w = {});

/// Mean error over the ground truths under greedy one-to-one matching.
/// Unmatched truths contribute 2.0 each; surplus detections add 2.0/NC each.
double multiple_error(const synth::GroundTruth& truths,
                      const std::vector<Detection>& dets,
                      const EvalWeights& w = {});

double success_rate(const std::vector<RunReport>& reports);

}  // namespace cabdetect::eval
