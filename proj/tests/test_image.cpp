#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cabdetect/image.hpp"
#include "doctest.h"

using namespace cabdetect;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("load_gray parses ascii PGM") {
  auto path = temp_path("cabdetect_p2.pgm");
  write_file(path, "P2\n# comment\n2 2\n255\n0 255\n255 0\n");
  GrayImage img = load_gray(path);
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.at(0, 0) == 0);
  CHECK(img.at(1, 0) == 255);
  CHECK(img.at(0, 1) == 255);
  CHECK(img.at(1, 1) == 0);
  std::remove(path.c_str());
}

TEST_CASE("load_gray rejects truncated pixel data") {
  auto path = temp_path("cabdetect_trunc.pgm");
  write_file(path, "P2\n2 2\n255\n0 255 255\n");
  CHECK_THROWS_AS(load_gray(path), ImageIoError);
  std::remove(path.c_str());
}

TEST_CASE("load_gray rejects missing file and bad magic") {
  CHECK_THROWS_AS(load_gray("/nonexistent/definitely_missing.pgm"),
                  ImageIoError);
  auto path = temp_path("cabdetect_bad.pgm");
  write_file(path, "P9\n2 2\n255\n0 0 0 0\n");
  CHECK_THROWS_AS(load_gray(path), ImageIoError);
  std::remove(path.c_str());
}

TEST_CASE("PPM white pixel maps to luma 255") {
  auto path = temp_path("cabdetect_white.ppm");
  write_file(path, "P3\n1 1\n255\n255 255 255\n");
  GrayImage img = load_gray(path);
  CHECK(img.at(0, 0) == 255);
  std::remove(path.c_str());
}

TEST_CASE("save/load round-trip is the identity on pixel data") {
  GrayImage img(7, 5);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    img.data[i] = static_cast<std::uint8_t>((i * 37) % 256);
  }
  for (bool binary : {true, false}) {
    auto path = temp_path("cabdetect_rt.pgm");
    save_gray(img, path, binary);
    GrayImage back = load_gray(path);
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.data == img.data);
    std::remove(path.c_str());
  }
}

TEST_CASE("edge_vector ordering and count") {
  EdgeMap edges(4, 3);
  CHECK(edge_vector(edges).count() == 0);

  edges.set(3, 1);
  edges.set(0, 2);
  EdgePoints pts = edge_vector(edges);
  REQUIRE(pts.count() == 2);
  CHECK(pts.points[0] == std::pair<int, int>{3, 1});
  CHECK(pts.points[1] == std::pair<int, int>{0, 2});
}

TEST_CASE("edge_vector count equals true mask entries on random maps") {
  std::uint32_t state = 12345;
  auto next = [&] { return state = state * 1664525u + 1013904223u; };
  for (int trial = 0; trial < 20; ++trial) {
    EdgeMap edges(40, 30);
    std::size_t expected = 0;
    for (auto& m : edges.mask) {
      m = (next() >> 16) % 4 == 0 ? 1 : 0;
      expected += m;
    }
    CHECK(edge_vector(edges).count() == expected);
  }
}

TEST_CASE("edge map PGM round-trip") {
  EdgeMap edges(6, 4);
  edges.set(1, 1);
  edges.set(5, 3);
  auto path = temp_path("cabdetect_edges.pgm");
  save_edge_map(edges, path);
  EdgeMap back = load_edge_map(path);
  CHECK(back.mask == edges.mask);
  std::remove(path.c_str());
}
