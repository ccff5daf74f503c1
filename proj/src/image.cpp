#include "cabdetect/image.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cabdetect {

namespace {

// Skips whitespace and '#' comments between header tokens.
int next_header_int(std::istream& in, const std::string& path) {
  int c = in.peek();
  while (c != EOF) {
    if (std::isspace(c)) {
      in.get();
    } else if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else {
      break;
    }
    c = in.peek();
  }
  int value;
  if (!(in >> value)) {
    throw ImageIoError(path + ": malformed header");
  }
  return value;
}

std::uint8_t luma(int r, int g, int b) {
  double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return static_cast<std::uint8_t>(std::lround(y));
}

}  // namespace

GrayImage load_gray(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ImageIoError(path + ": cannot open file");
  }
  std::string magic;
  in >> magic;
  bool ascii = (magic == "P2" || magic == "P3");
  bool color = (magic == "P3" || magic == "P6");
  if (magic != "P2" && magic != "P5" && magic != "P3" && magic != "P6") {
    throw ImageIoError(path + ": unsupported format '" + magic + "'");
  }

  int width = next_header_int(in, path);
  int height = next_header_int(in, path);
  int maxval = next_header_int(in, path);
  if (width < 1 || height < 1 || maxval < 1 || maxval > 255) {
    throw ImageIoError(path + ": malformed header");
  }

  GrayImage img(width, height);
  std::size_t n = img.data.size();
  int channels = color ? 3 : 1;

  if (ascii) {
    for (std::size_t i = 0; i < n; ++i) {
      int v[3] = {0, 0, 0};
      for (int c = 0; c < channels; ++c) {
        if (!(in >> v[c]) || v[c] < 0 || v[c] > maxval) {
          throw ImageIoError(path + ": truncated or out-of-range pixel data");
        }
      }
      img.data[i] = color ? luma(v[0], v[1], v[2])
                          : static_cast<std::uint8_t>(v[0]);
    }
  } else {
    in.get();  // single whitespace after maxval
    std::vector<std::uint8_t> raw(n * channels);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
      throw ImageIoError(path + ": truncated pixel data");
    }
    for (std::size_t i = 0; i < n; ++i) {
      img.data[i] = color ? luma(raw[3 * i], raw[3 * i + 1], raw[3 * i + 2])
                          : raw[i];
    }
  }
  return img;
}

void save_gray(const GrayImage& img, const std::string& path, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ImageIoError(path + ": cannot open file for writing");
  }
  out << (binary ? "P5" : "P2") << "\n"
      << img.width << " " << img.height << "\n255\n";
  if (binary) {
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
  } else {
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        out << static_cast<int>(img.at(x, y)) << (x + 1 == img.width ? "" : " ");
      }
      out << "\n";
    }
  }
  if (!out) {
    throw ImageIoError(path + ": write failed");
  }
}

EdgeMap load_edge_map(const std::string& path) {
  GrayImage img = load_gray(path);
  EdgeMap edges(img.width, img.height);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    edges.mask[i] = img.data[i] >= 128 ? 1 : 0;
  }
  return edges;
}

void save_edge_map(const EdgeMap& edges, const std::string& path, bool binary) {
  GrayImage img(edges.width, edges.height);
  for (std::size_t i = 0; i < edges.mask.size(); ++i) {
    img.data[i] = edges.mask[i] ? 255 : 0;
  }
  save_gray(img, path, binary);
}

RgbImage::RgbImage(const GrayImage& g)
    : width(g.width), height(g.height), data(g.data.size() * 3) {
  for (std::size_t i = 0; i < g.data.size(); ++i) {
    data[3 * i] = data[3 * i + 1] = data[3 * i + 2] = g.data[i];
  }
}

void save_rgb(const RgbImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ImageIoError(path + ": cannot open file for writing");
  }
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
  if (!out) {
    throw ImageIoError(path + ": write failed");
  }
}

EdgePoints edge_vector(const EdgeMap& edges) {
  EdgePoints result;
  for (int y = 0; y < edges.height; ++y) {
    for (int x = 0; x < edges.width; ++x) {
      if (edges.at(x, y)) {
        result.points.emplace_back(x, y);
      }
    }
  }
  return result;
}

}  // namespace cabdetect
