#include "cabdetect/synth.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cabdetect/raster.hpp"
#include "json.hpp"

namespace cabdetect::synth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Parametric angle of a raster point relative to the ellipse, in [0, 2pi).
double param_angle(const EllipseParams& e, int x, int y) {
  double dx = x - e.x0;
  double dy = y - e.y0;
  double ct = std::cos(e.theta);
  double st = std::sin(e.theta);
  double u = ct * dx + st * dy;
  double v = -st * dx + ct * dy;
  double t = std::atan2(v / e.r_min, u / e.r_max);
  return t < 0 ? t + kTwoPi : t;
}

bool in_gap(double t, double t_start, double t_end) {
  double span = t_end - t_start;
  double offset = std::fmod(t - t_start, kTwoPi);
  if (offset < 0) offset += kTwoPi;
  return offset < span;
}

void draw_segment(EdgeMap& edges, GrayImage& img, double x0d, double y0d,
                  double x1d, double y1d) {
  int x0 = static_cast<int>(std::lround(x0d));
  int y0 = static_cast<int>(std::lround(y0d));
  int x1 = static_cast<int>(std::lround(x1d));
  int y1 = static_cast<int>(std::lround(y1d));
  int dx = std::abs(x1 - x0);
  int dy = -std::abs(y1 - y0);
  int sx = x0 < x1 ? 1 : -1;
  int sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    if (edges.inside(x0, y0)) {
      edges.set(x0, y0);
      img.at(x0, y0) = 255;
    }
    if (x0 == x1 && y0 == y1) break;
    int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

bool shape_touches_image(const std::vector<std::pair<double, double>>& verts,
                         int width, int height) {
  for (const auto& [x, y] : verts) {
    if (x >= 0 && x < width && y >= 0 && y < height) return true;
  }
  return false;
}

}  // namespace

void SceneSpec::validate() const {
  if (width < 1 || height < 1) {
    throw SceneError("scene: non-positive dimensions");
  }
  if (noise_density < 0.0 || noise_density >= 0.5) {
    throw SceneError("scene: noise_density must be in [0, 0.5)");
  }
  for (const auto& se : ellipses) {
    const auto& e = se.params;
    if (!(e.r_max >= e.r_min && e.r_min > 0.0)) {
      throw SceneError("scene: invalid ellipse radii");
    }
    if (e.x0 + e.r_max < 0 || e.x0 - e.r_max >= width || e.y0 + e.r_max < 0 ||
        e.y0 - e.r_max >= height) {
      throw SceneError("scene: ellipse fully outside image");
    }
  }
  for (const auto& d : distractors) {
    std::size_t expected = d.kind == Distractor::Kind::Triangle ? 3 : 2;
    if (d.vertices.size() != expected) {
      throw SceneError("scene: distractor vertex count mismatch");
    }
    if (!shape_touches_image(d.vertices, width, height)) {
      throw SceneError("scene: distractor fully outside image");
    }
  }
}

Scene render(const SceneSpec& spec) {
  spec.validate();
  Scene scene;
  scene.image = GrayImage(spec.width, spec.height, 0);
  scene.edges = EdgeMap(spec.width, spec.height);

  for (const auto& se : spec.ellipses) {
    TestSet outline = rasterize(se.params, spec.width, spec.height);
    for (const auto& [x, y] : outline.points) {
      if (se.occlusion) {
        double t = param_angle(se.params, x, y);
        if (in_gap(t, se.occlusion->first, se.occlusion->second)) continue;
      }
      scene.edges.set(x, y);
      scene.image.at(x, y) = 255;
    }
    scene.truth.ellipses.push_back(se.params);
  }

  for (const auto& d : spec.distractors) {
    const auto& v = d.vertices;
    switch (d.kind) {
      case Distractor::Kind::Rectangle: {
        double x0 = v[0].first, y0 = v[0].second;
        double x1 = v[1].first, y1 = v[1].second;
        draw_segment(scene.edges, scene.image, x0, y0, x1, y0);
        draw_segment(scene.edges, scene.image, x1, y0, x1, y1);
        draw_segment(scene.edges, scene.image, x1, y1, x0, y1);
        draw_segment(scene.edges, scene.image, x0, y1, x0, y0);
        break;
      }
      case Distractor::Kind::Triangle:
        draw_segment(scene.edges, scene.image, v[0].first, v[0].second,
                     v[1].first, v[1].second);
        draw_segment(scene.edges, scene.image, v[1].first, v[1].second,
                     v[2].first, v[2].second);
        draw_segment(scene.edges, scene.image, v[2].first, v[2].second,
                     v[0].first, v[0].second);
        break;
      case Distractor::Kind::Segment:
        draw_segment(scene.edges, scene.image, v[0].first, v[0].second,
                     v[1].first, v[1].second);
        break;
    }
  }
  return scene;
}

void add_salt_pepper(GrayImage& img, double density, cab::Rng& rng) {
  for (auto& px : img.data) {
    double u = rng.uniform();
    if (u < density / 2) {
      px = 255;
    } else if (u < density) {
      px = 0;
    }
  }
}

void add_salt_pepper(EdgeMap& edges, double density, cab::Rng& rng) {
  for (auto& px : edges.mask) {
    double u = rng.uniform();
    if (u < density / 2) {
      px = 1;
    } else if (u < density) {
      px = 0;
    }
  }
}

SceneSpec parse_scene_spec(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& ex) {
    throw SceneError(std::string("scene spec: ") + ex.what());
  }

  SceneSpec spec;
  try {
    spec.width = j.value("width", 400);
    spec.height = j.value("height", 300);
    spec.noise_density = j.value("noise_density", 0.0);
    spec.seed = j.value("seed", 0ull);
    for (const auto& je : j.value("ellipses", nlohmann::json::array())) {
      SceneEllipse se;
      se.params.x0 = je.at("x0").get<double>();
      se.params.y0 = je.at("y0").get<double>();
      se.params.r_max = je.at("r_max").get<double>();
      se.params.r_min = je.at("r_min").get<double>();
      se.params.theta = je.value("theta_deg", 0.0) * std::numbers::pi / 180.0;
      if (je.contains("occlusion")) {
        se.occlusion = {je["occlusion"].at(0).get<double>(),
                        je["occlusion"].at(1).get<double>()};
      }
      spec.ellipses.push_back(se);
    }
    for (const auto& jd : j.value("distractors", nlohmann::json::array())) {
      Distractor d;
      std::string type = jd.at("type").get<std::string>();
      if (type == "rectangle") {
        d.kind = Distractor::Kind::Rectangle;
        d.vertices = {{jd.at("x0").get<double>(), jd.at("y0").get<double>()},
                      {jd.at("x1").get<double>(), jd.at("y1").get<double>()}};
      } else {
        d.kind = type == "triangle" ? Distractor::Kind::Triangle
                                    : Distractor::Kind::Segment;
        if (type != "triangle" && type != "segment") {
          throw SceneError("scene spec: unknown distractor type '" + type + "'");
        }
        for (const auto& jp : jd.at("points")) {
          d.vertices.emplace_back(jp.at(0).get<double>(),
                                  jp.at(1).get<double>());
        }
      }
      spec.distractors.push_back(d);
    }
  } catch (const nlohmann::json::exception& ex) {
    throw SceneError(std::string("scene spec: ") + ex.what());
  }
  spec.validate();
  return spec;
}

SceneSpec load_scene_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SceneError(path + ": cannot open scene spec");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene_spec(ss.str());
}

std::string ground_truth_to_json(const GroundTruth& truth) {
  nlohmann::json j;
  j["ellipses"] = nlohmann::json::array();
  int id = 0;
  for (const auto& e : truth.ellipses) {
    j["ellipses"].push_back({{"id", id++},
                             {"x0", e.x0},
                             {"y0", e.y0},
                             {"r_max", e.r_max},
                             {"r_min", e.r_min},
                             {"theta_deg", e.theta * 180.0 / std::numbers::pi}});
  }
  return j.dump(2) + "\n";
}

GroundTruth load_ground_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SceneError(path + ": cannot open ground truth");
  }
  nlohmann::json j;
  try {
    in >> j;
    GroundTruth truth;
    for (const auto& je : j.at("ellipses")) {
      EllipseParams e;
      e.x0 = je.at("x0").get<double>();
      e.y0 = je.at("y0").get<double>();
      e.r_max = je.at("r_max").get<double>();
      e.r_min = je.at("r_min").get<double>();
      e.theta = je.at("theta_deg").get<double>() * std::numbers::pi / 180.0;
      truth.ellipses.push_back(e);
    }
    return truth;
  } catch (const nlohmann::json::exception& ex) {
    throw SceneError(path + ": " + ex.what());
  }
}

}  // namespace cabdetect::synth
