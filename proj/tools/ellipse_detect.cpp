#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cabdetect/canny.hpp"
#include "cabdetect/detector.hpp"
#include "cabdetect/eval.hpp"
#include "cabdetect/image.hpp"
#include "cabdetect/raster.hpp"
#include "cabdetect/synth.hpp"
#include "json.hpp"

namespace {

using namespace cabdetect;

struct DetectorFlags {
  DetectorConfig cfg;
  CannyConfig canny_cfg;

  void attach(CLI::App* app) {
    app->add_option("--population", cfg.cab.population_size, "Population size N_p")
        ->check(CLI::PositiveNumber);
    app->add_option("--memory-size", cfg.cab.memory_size, "Memory size B")
        ->check(CLI::PositiveNumber);
    app->add_option("--prob-h", cfg.cab.prob_h, "Attraction memory probability H")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--prob-p", cfg.cab.prob_p, "Random movement probability P")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--iterations", cfg.cab.iterations, "Generations NI")
        ->check(CLI::PositiveNumber);
    app->add_option("--perturbation-frac", cfg.cab.perturbation_frac,
                    "Elite perturbation fraction");
    app->add_option("--r-min-low", cfg.r_min_low, "Feasible r_min lower bound");
    app->add_option("--r-min-high", cfg.r_min_high,
                    "Feasible r_min upper bound (0 = min(w,h)/2)");
    app->add_option("--r-max-low", cfg.r_max_low, "Feasible r_max lower bound");
    app->add_option("--r-max-high", cfg.r_max_high,
                    "Feasible r_max upper bound (0 = min(w,h)/2)");
    app->add_option("--sensitivity", cfg.sensitivity, "Similarity sensitivity s")
        ->check(CLI::PositiveNumber);
    app->add_option("--f-th-divisor", cfg.f_th_divisor, "Fitness cutoff divisor")
        ->check(CLI::PositiveNumber);
    app->add_option("--sigma", canny_cfg.gaussian_sigma, "Canny Gaussian sigma");
    app->add_option("--low-frac", canny_cfg.low_frac, "Canny low threshold fraction");
    app->add_option("--high-frac", canny_cfg.high_frac,
                    "Canny high threshold fraction");
  }
};

nlohmann::json config_json(const DetectorConfig& cfg) {
  return {{"population", cfg.cab.population_size},
          {"memory_size", cfg.cab.memory_size},
          {"prob_h", cfg.cab.prob_h},
          {"prob_p", cfg.cab.prob_p},
          {"iterations", cfg.cab.iterations},
          {"perturbation_frac", cfg.cab.perturbation_frac},
          {"r_min_range", {cfg.r_min_low, cfg.r_min_high}},
          {"r_max_range", {cfg.r_max_low, cfg.r_max_high}},
          {"sensitivity", cfg.sensitivity},
          {"f_th_divisor", cfg.f_th_divisor}};
}

nlohmann::json detections_json(const std::vector<Detection>& dets) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : dets) {
    arr.push_back({{"x0", d.ellipse.x0},
                   {"y0", d.ellipse.y0},
                   {"r_max", d.ellipse.r_max},
                   {"r_min", d.ellipse.r_min},
                   {"theta_deg", d.ellipse.theta * 180.0 / std::numbers::pi},
                   {"fitness", d.fitness},
                   {"n_s", d.n_s}});
  }
  return arr;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ImageIoError(path + ": cannot open file for writing");
  }
  out << j.dump(2) << "\n";
}

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
  return buf;
}

int cmd_detect(const std::string& input, const std::string& output,
               const std::string& overlay, bool edge_input, bool no_timestamp,
               std::uint64_t seed, const DetectorFlags& flags) {
  EdgeMap edges;
  GrayImage gray;
  bool have_gray = false;
  if (edge_input) {
    edges = load_edge_map(input);
  } else {
    gray = load_gray(input);
    have_gray = true;
    edges = canny(gray, flags.canny_cfg);
  }

  auto t0 = std::chrono::steady_clock::now();
  std::vector<Detection> dets;
  try {
    dets = detect(edges, flags.cfg, seed);
  } catch (const TooFewEdgePixels&) {
    // A near-empty edge map is a valid "nothing found" outcome for the CLI.
  }
  double ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();

  nlohmann::json j;
  j["image"] = input;
  j["seed"] = seed;
  j["config"] = config_json(flags.cfg.resolved(edges.width, edges.height));
  j["detections"] = detections_json(dets);
  j["runtime_ms"] = no_timestamp ? 0.0 : ms;
  if (!no_timestamp) {
    j["timestamp"] = iso_timestamp();
  }
  if (!output.empty()) {
    write_json(j, output);
  } else {
    std::cout << j.dump(2) << "\n";
  }

  if (!overlay.empty()) {
    RgbImage rgb(have_gray ? gray : [&] {
      GrayImage g(edges.width, edges.height);
      for (std::size_t i = 0; i < edges.mask.size(); ++i) {
        g.data[i] = edges.mask[i] ? 255 : 0;
      }
      return g;
    }());
    for (const auto& d : dets) {
      TestSet set = rasterize(d.ellipse, rgb.width, rgb.height);
      for (const auto& [x, y] : set.points) {
        rgb.set(x, y, 255, 0, 0);
      }
    }
    save_rgb(rgb, overlay);
  }
  return dets.empty() ? 2 : 0;
}

int cmd_synth(const std::string& spec_path, const std::string& image_out,
              const std::string& edges_out, const std::string& truth_out) {
  synth::SceneSpec spec = synth::load_scene_spec(spec_path);
  synth::Scene scene = synth::render(spec);
  if (spec.noise_density > 0.0) {
    cab::Rng rng(spec.seed);
    synth::add_salt_pepper(scene.image, spec.noise_density, rng);
    synth::add_salt_pepper(scene.edges, spec.noise_density, rng);
  }
  save_gray(scene.image, image_out);
  save_edge_map(scene.edges, edges_out);
  std::ofstream out(truth_out);
  if (!out) {
    throw ImageIoError(truth_out + ": cannot open file for writing");
  }
  out << synth::ground_truth_to_json(scene.truth);
  return 0;
}

int cmd_eval(const std::string& input, const std::string& truth_path,
             const std::string& output, bool edge_input, std::uint64_t seed,
             int runs, const DetectorFlags& flags) {
  EdgeMap edges = edge_input
                      ? load_edge_map(input)
                      : canny(load_gray(input), flags.canny_cfg);
  synth::GroundTruth truth = synth::load_ground_truth(truth_path);

  std::vector<eval::RunReport> reports;
  nlohmann::json per_run = nlohmann::json::array();
  for (int i = 0; i < runs; ++i) {
    std::uint64_t run_seed = seed + static_cast<std::uint64_t>(i);
    auto t0 = std::chrono::steady_clock::now();
    std::vector<Detection> dets = detect(edges, flags.cfg, run_seed);
    eval::RunReport report;
    report.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report.me = eval::multiple_error(truth, dets);
    report.success = report.me < 1.0;
    reports.push_back(report);
    per_run.push_back({{"seed", run_seed},
                       {"ME", report.me},
                       {"success", report.success},
                       {"runtime_s", report.runtime_s}});
  }

  auto mean_std = [](auto getter, const std::vector<eval::RunReport>& rs) {
    double mean = 0.0;
    for (const auto& r : rs) mean += getter(r);
    mean /= static_cast<double>(rs.size());
    double var = 0.0;
    for (const auto& r : rs) {
      double d = getter(r) - mean;
      var += d * d;
    }
    var /= static_cast<double>(rs.size());
    return std::make_pair(mean, std::sqrt(var));
  };
  auto [me_mean, me_std] =
      mean_std([](const eval::RunReport& r) { return r.me; }, reports);
  auto [rt_mean, rt_std] =
      mean_std([](const eval::RunReport& r) { return r.runtime_s; }, reports);

  nlohmann::json j;
  j["per_run"] = per_run;
  j["SR"] = eval::success_rate(reports);
  j["ME_mean"] = me_mean;
  j["ME_std"] = me_std;
  j["runtime_mean_s"] = rt_mean;
  j["runtime_std_s"] = rt_std;
  if (!output.empty()) {
    write_json(j, output);
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_bench(std::uint64_t seed, int iterations) {
  // Bimodal Gaussian on the unit square; both peaks should land in memory.
  const std::vector<std::vector<double>> optima = {{0.25, 0.25}, {0.75, 0.75}};
  auto fitness = [&](const std::vector<double>& x) {
    double best = 0.0;
    for (const auto& c : optima) {
      double d2 = (x[0] - c[0]) * (x[0] - c[0]) + (x[1] - c[1]) * (x[1] - c[1]);
      best = std::max(best, std::exp(-d2 / 0.02));
    }
    return best;
  };

  cab::Bounds bounds{{0.0, 0.0}, {1.0, 1.0}};
  cab::CabConfig cfg;
  cfg.iterations = iterations;
  cab::Rng rng(seed);
  auto memory = cab::run(bounds, cfg, fitness, cab::euclidean_distance, rng);

  std::cout << "bimodal gaussian benchmark (seed " << seed << ")\n";
  for (const auto& c : optima) {
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& m : memory) {
      best_d = std::min(best_d, cab::euclidean_distance(m.position, c));
    }
    std::cout << "optimum (" << c[0] << ", " << c[1] << "): nearest memory "
              << "element at distance " << best_d << "\n";
  }
  std::cout << "memory size " << memory.size() << ", best fitness "
            << memory.front().fitness << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-ellipse detector based on a collective-behavior "
               "multimodal optimizer"};
  app.require_subcommand(1);

  std::string input, output, overlay, spec_path, truth_path;
  std::string image_out, edges_out, truth_out;
  bool edge_input = false;
  bool no_timestamp = false;
  std::uint64_t seed = 1;
  int runs = 35;
  DetectorFlags flags;

  auto* detect_cmd = app.add_subcommand("detect", "Detect ellipses in an image");
  detect_cmd->add_option("--input", input, "Input PGM/PPM image")->required();
  detect_cmd->add_option("--output", output, "Detections JSON (default stdout)");
  detect_cmd->add_option("--overlay", overlay, "PPM overlay output path");
  detect_cmd->add_flag("--edge-input", edge_input,
                       "Treat input as a precomputed binary edge map");
  detect_cmd->add_flag("--no-timestamp", no_timestamp,
                       "Omit timestamp and zero runtime for reproducible output");
  detect_cmd->add_option("--seed", seed, "RNG seed");
  flags.attach(detect_cmd);

  auto* synth_cmd = app.add_subcommand("synth", "Render a synthetic scene");
  synth_cmd->add_option("--spec", spec_path, "Scene spec JSON")->required();
  synth_cmd->add_option("--image", image_out, "Output image PGM")->required();
  synth_cmd->add_option("--edges", edges_out, "Output edge-map PGM")->required();
  synth_cmd->add_option("--truth", truth_out, "Output ground-truth JSON")
      ->required();

  auto* eval_cmd = app.add_subcommand("eval", "Seeded evaluation batch");
  eval_cmd->add_option("--input", input, "Input image or edge map")->required();
  eval_cmd->add_option("--truth", truth_path, "Ground-truth JSON")->required();
  eval_cmd->add_option("--output", output, "Report JSON (default stdout)");
  eval_cmd->add_flag("--edge-input", edge_input,
                     "Treat input as a precomputed binary edge map");
  eval_cmd->add_option("--seed", seed, "Base RNG seed");
  eval_cmd->add_option("--runs", runs, "Number of seeded runs")
      ->check(CLI::PositiveNumber);
  flags.attach(eval_cmd);

  auto* bench_cmd = app.add_subcommand(
      "bench", "Run the optimizer on a built-in multimodal function");
  bench_cmd->add_option("--seed", seed, "RNG seed");
  int bench_iterations = 200;
  bench_cmd->add_option("--iterations", bench_iterations, "Generations NI")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (detect_cmd->parsed()) {
      return cmd_detect(input, output, overlay, edge_input, no_timestamp, seed,
                        flags);
    }
    if (synth_cmd->parsed()) {
      return cmd_synth(spec_path, image_out, edges_out, truth_out);
    }
    if (eval_cmd->parsed()) {
      return cmd_eval(input, truth_path, output, edge_input, seed, runs, flags);
    }
    if (bench_cmd->parsed()) {
      return cmd_bench(seed, bench_iterations);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 1;
}
