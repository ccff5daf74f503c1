#include "cabdetect/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace cabdetect::eval {

namespace {

constexpr double kMissPenalty = 2.0;
constexpr double kCircularAxisRatio = 0.99;

bool near_circular(const EllipseParams& e) {
  return e.r_max > 0.0 && e.r_min / e.r_max > kCircularAxisRatio;
}

}  // namespace

double error_score(const EllipseParams& truth, const EllipseParams& det,
                   const EvalWeights& w) {
  double center = std::abs(truth.x0 - det.x0) + std::abs(truth.y0 - det.y0);
  double radius = (std::abs(truth.r_max - det.r_max) +
                   std::abs(truth.r_min - det.r_min)) /
                  2.0;
  double angle_deg = 0.0;
  if (!(near_circular(truth) && near_circular(det))) {
    double d = std::abs(truth.theta - det.theta) * 180.0 / std::numbers::pi;
    d = std::fmod(d, 180.0);
    angle_deg = std::min(d, 180.0 - d);
  }
  return w.p1 * center + w.p2 * radius + w.p3 * angle_deg;
}

double multiple_error(const synth::GroundTruth& truths,
                      const std::vector<Detection>& dets,
                      const EvalWeights& w) {
  const std::size_t nc = truths.ellipses.size();
  if (nc == 0) {
    throw std::invalid_argument("multiple_error: empty ground truth");
  }

  // Greedy one-to-one matching by ascending Es; ties resolve to the lower
  // truth index, then the lower detection index.
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  pairs.reserve(nc * dets.size());
  for (std::size_t t = 0; t < nc; ++t) {
    for (std::size_t d = 0; d < dets.size(); ++d) {
      pairs.emplace_back(error_score(truths.ellipses[t], dets[d].ellipse, w), t,
                         d);
    }
  }
  std::sort(pairs.begin(), pairs.end());

  std::vector<bool> truth_used(nc, false);
  std::vector<bool> det_used(dets.size(), false);
  double total = 0.0;
  std::size_t matched = 0;
  for (const auto& [es, t, d] : pairs) {
    if (truth_used[t] || det_used[d]) continue;
    truth_used[t] = true;
    det_used[d] = true;
    total += es;
    ++matched;
  }
  total += kMissPenalty * static_cast<double>(nc - matched);        // misses
  total += kMissPenalty * static_cast<double>(dets.size() - matched);  // surplus
  return total / static_cast<double>(nc);
}

double success_rate(const std::vector<RunReport>& reports) {
  if (reports.empty()) {
    throw std::invalid_argument("success_rate: no reports");
  }
  std::size_t ok = 0;
  for (const auto& r : reports) {
    if (r.success) ++ok;
  }
  return 100.0 * static_cast<double>(ok) / static_cast<double>(reports.size());
}

}  // namespace cabdetect::eval
