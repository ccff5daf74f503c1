#include "cabdetect/cab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cabdetect::cab {

namespace {

void sort_by_fitness(std::vector<ScoredPosition>& v) {
  std::stable_sort(v.begin(), v.end(),
                   [](const ScoredPosition& a, const ScoredPosition& b) {
                     return a.fitness > b.fitness;
                   });
}

std::size_t nearest_index(const std::vector<ScoredPosition>& memory,
                          const std::vector<double>& x,
                          const DistanceFn& distance) {
  std::size_t best = 0;
  double best_d = distance(x, memory[0].position);
  for (std::size_t i = 1; i < memory.size(); ++i) {
    double d = distance(x, memory[i].position);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

bool Bounds::valid() const {
  if (low.empty() || low.size() != high.size()) return false;
  for (std::size_t j = 0; j < low.size(); ++j) {
    if (!(low[j] < high[j])) return false;
  }
  return true;
}

double Bounds::clamp(double v, std::size_t j) const {
  return std::clamp(v, low[j], high[j]);
}

double euclidean_distance(const std::vector<double>& a,
                          const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double d = a[j] - b[j];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double default_rho(const Bounds& bounds) {
  return 1.0 / (10.0 * static_cast<double>(bounds.dims()));
}

CabState initialize(const Bounds& bounds, const CabConfig& cfg,
                    const FitnessFn& fitness, Rng& rng) {
  if (!bounds.valid() || !cfg.valid()) {
    throw std::invalid_argument("cab::initialize: invalid bounds or config");
  }
  const std::size_t dims = bounds.dims();
  CabState state;
  state.population.resize(cfg.population_size);
  for (auto& sp : state.population) {
    sp.position.resize(dims);
    for (std::size_t j = 0; j < dims; ++j) {
      sp.position[j] = rng.uniform(bounds.low[j], bounds.high[j]);
    }
    sp.fitness = fitness(sp.position);
  }
  sort_by_fitness(state.population);
  state.memory_g.assign(state.population.begin(),
                        state.population.begin() + cfg.memory_size);
  state.memory_h = state.memory_g;  // shared only at this initial stage
  return state;
}

std::vector<std::vector<double>> keep_best(const CabState& state,
                                           const CabConfig& cfg,
                                           const Bounds& bounds, Rng& rng) {
  const std::size_t dims = bounds.dims();
  std::vector<std::vector<double>> result;
  result.reserve(cfg.memory_size);
  for (int l = 0; l < cfg.memory_size; ++l) {
    const auto& src = state.memory_h[l % state.memory_h.size()];
    std::vector<double> pos(dims);
    for (std::size_t j = 0; j < dims; ++j) {
      double span = cfg.perturbation_frac * (bounds.high[j] - bounds.low[j]);
      pos[j] = bounds.clamp(src.position[j] + rng.uniform(-span, span), j);
    }
    result.push_back(std::move(pos));
  }
  return result;
}

std::vector<double> move_toward(const std::vector<double>& x,
                                const std::vector<double>& target, double r,
                                int sign, const Bounds& bounds) {
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    out[j] = bounds.clamp(x[j] + sign * r * (target[j] - x[j]), j);
  }
  return out;
}

std::vector<std::vector<double>> move_or_randomize(const CabState& state,
                                                   const CabConfig& cfg,
                                                   const Bounds& bounds,
                                                   const DistanceFn& distance,
                                                   Rng& rng) {
  const std::size_t dims = bounds.dims();
  std::vector<std::vector<double>> result;
  result.reserve(cfg.population_size - cfg.memory_size);
  for (int i = cfg.memory_size; i < cfg.population_size; ++i) {
    const auto& x = state.population[i].position;
    if (rng.uniform() < cfg.prob_p) {
      std::vector<double> fresh(dims);
      for (std::size_t j = 0; j < dims; ++j) {
        fresh[j] = rng.uniform(bounds.low[j], bounds.high[j]);
      }
      result.push_back(std::move(fresh));
    } else {
      const auto& memory =
          rng.uniform() < cfg.prob_h ? state.memory_h : state.memory_g;
      const auto& target = memory[nearest_index(memory, x, distance)].position;
      double r = rng.uniform();
      int sign = rng.coin() ? 1 : -1;
      result.push_back(move_toward(x, target, r, sign, bounds));
    }
  }
  return result;
}

std::vector<ScoredPosition> update_memory(const std::vector<ScoredPosition>& memory_h,
                                          const std::vector<ScoredPosition>& memory_g,
                                          double rho, std::size_t capacity,
                                          const DistanceFn& distance) {
  std::vector<ScoredPosition> merged = memory_h;
  merged.insert(merged.end(), memory_g.begin(), memory_g.end());
  sort_by_fitness(merged);

  std::vector<ScoredPosition> kept;
  for (const auto& candidate : merged) {
    bool dominated = false;
    for (const auto& winner : kept) {
      if (distance(candidate.position, winner.position) < rho) {
        dominated = true;
        break;
      }
    }
    if (!dominated) {
      kept.push_back(candidate);
      if (kept.size() == capacity) break;
    }
  }
  return kept;
}

std::vector<ScoredPosition> run(const Bounds& bounds, const CabConfig& cfg,
                                const FitnessFn& fitness,
                                const DistanceFn& distance, Rng& rng) {
  double rho = cfg.rho > 0.0 ? cfg.rho : default_rho(bounds);
  const std::size_t capacity = static_cast<std::size_t>(cfg.memory_size);

  CabState state = initialize(bounds, cfg, fitness, rng);
  for (int gen = 0; gen < cfg.iterations; ++gen) {
    sort_by_fitness(state.population);
    state.memory_g.assign(state.population.begin(),
                          state.population.begin() + cfg.memory_size);
    state.memory_h =
        update_memory(state.memory_h, state.memory_g, rho, capacity, distance);

    auto elites = keep_best(state, cfg, bounds, rng);
    auto movers = move_or_randomize(state, cfg, bounds, distance, rng);

    std::size_t slot = 0;
    for (auto& pos : elites) {
      state.population[slot].position = std::move(pos);
      state.population[slot].fitness = fitness(state.population[slot].position);
      ++slot;
    }
    for (auto& pos : movers) {
      state.population[slot].position = std::move(pos);
      state.population[slot].fitness = fitness(state.population[slot].position);
      ++slot;
    }
    ++state.generation;
  }
  sort_by_fitness(state.memory_h);
  return state.memory_h;
}

}  // namespace cabdetect::cab
