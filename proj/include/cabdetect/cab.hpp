#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace cabdetect::cab {

/// Deterministic uniform source. Doubles are derived from the raw 64-bit
/// stream directly so results are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }
  bool coin() { return (eng_() & 1u) != 0; }

 private:
  std::mt19937_64 eng_;
};

struct Bounds {
  std::vector<double> low;
  std::vector<double> high;

  std::size_t dims() const { return low.size(); }
  bool valid() const;
  double clamp(double v, std::size_t j) const;
};

struct CabConfig {
  int population_size = 30;  // N_p
  int memory_size = 12;      // B
  double prob_h = 0.5;       // H
  double prob_p = 0.1;       // P
  int iterations = 200;      // NI
  double rho = 0.0;          // minimum memory distance; <= 0 means default_rho
  double perturbation_frac = 0.01;

  bool valid() const {
    return population_size >= 2 && memory_size >= 1 &&
           memory_size < population_size && prob_h >= 0.0 && prob_h <= 1.0 &&
           prob_p >= 0.0 && prob_p <= 1.0 && iterations >= 1 &&
           perturbation_frac >= 0.0;
  }
};

struct ScoredPosition {
  std::vector<double> position;
  double fitness = 0.0;
};

struct CabState {
  std::vector<ScoredPosition> population;  // sorted by descending fitness
  std::vector<ScoredPosition> memory_g;
  std::vector<ScoredPosition> memory_h;
  int generation = 0;
};

using FitnessFn = std::function<double(const std::vector<double>&)>;
using DistanceFn =
    std::function<double(const std::vector<double>&, const std::vector<double>&)>;

double euclidean_distance(const std::vector<double>& a,
                          const std::vector<double>& b);

/// 1/(10*D): the memory-competition radius evaluated on per-dimension
/// normalized bounds.
double default_rho(const Bounds& bounds);

CabState initialize(const Bounds& bounds, const CabConfig& cfg,
                    const FitnessFn& fitness, Rng& rng);

/// New positions for the first B slots: historical memory elements plus a
/// small uniform perturbation, clamped to bounds. Memory elements are reused
/// cyclically when |M_h| < B.
std::vector<std::vector<double>> keep_best(const CabState& state,
                                           const CabConfig& cfg,
                                           const Bounds& bounds, Rng& rng);

/// Attraction/repulsion step applied to one individual; exposed so the
/// arithmetic can be tested without driving the RNG.
std::vector<double> move_toward(const std::vector<double>& x,
                                const std::vector<double>& target, double r,
                                int sign, const Bounds& bounds);

/// New positions for slots B+1..N_p: with probability P a fresh uniform
/// sample, otherwise a move toward/away from the nearest memory element
/// (M_h with probability H, M_g otherwise).
std::vector<std::vector<double>> move_or_randomize(const CabState& state,
                                                   const CabConfig& cfg,
                                                   const Bounds& bounds,
                                                   const DistanceFn& distance,
                                                   Rng& rng);

/// Merges M_h and M_g, resolves pairs closer than rho by fitness dominance
/// and returns the best surviving elements (at most the M_h capacity).
std::vector<ScoredPosition> update_memory(const std::vector<ScoredPosition>& memory_h,
                                          const std::vector<ScoredPosition>& memory_g,
                                          double rho, std::size_t capacity,
                                          const DistanceFn& distance);

/// Full optimization: NI generations, returns the final historical memory
/// sorted by descending fitness.
std::vector<ScoredPosition> run(const Bounds& bounds, const CabConfig& cfg,
                                const FitnessFn& fitness,
                                const DistanceFn& distance, Rng& rng);

}  // namespace cabdetect::cab
