#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qiren/data/dataset.hpp"

namespace qiren {

namespace {

// Next whitespace-separated token, skipping '#' comments to end of line.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(char(c));
  }
  return tok;
}

int next_int(std::istream& in, const char* what) {
  const std::string tok = next_token(in);
  if (tok.empty()) throw std::runtime_error(std::string("PGM: missing ") + what);
  size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &used);
  } catch (...) {
    throw std::runtime_error(std::string("PGM: bad ") + what + ": " + tok);
  }
  if (used != tok.size())
    throw std::runtime_error(std::string("PGM: bad ") + what + ": " + tok);
  return v;
}

}  // namespace

PgmImage pgm_read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  const std::string magic = next_token(in);
  if (magic != "P2" && magic != "P5")
    throw std::runtime_error(path + ": not a P2/P5 PGM");
  PgmImage img;
  img.width = next_int(in, "width");
  img.height = next_int(in, "height");
  img.maxval = next_int(in, "maxval");
  if (img.width <= 0 || img.height <= 0)
    throw std::runtime_error(path + ": bad dimensions");
  if (img.maxval <= 0 || img.maxval > 65535)
    throw std::runtime_error(path + ": bad maxval");
  const size_t n = size_t(img.width) * img.height;
  img.pixels.reserve(n);
  if (magic == "P2") {
    for (size_t i = 0; i < n; ++i)
      img.pixels.push_back(double(next_int(in, "pixel")));
  } else {
    // single whitespace byte separates header from raster
    const bool two_byte = img.maxval > 255;
    std::vector<char> raw(n * (two_byte ? 2 : 1));
    in.read(raw.data(), std::streamsize(raw.size()));
    if (size_t(in.gcount()) != raw.size())
      throw std::runtime_error(path + ": truncated raster");
    for (size_t i = 0; i < n; ++i) {
      if (two_byte)  // big-endian per the format
        img.pixels.push_back(double((uint8_t(raw[2 * i]) << 8) |
                                    uint8_t(raw[2 * i + 1])));
      else
        img.pixels.push_back(double(uint8_t(raw[i])));
    }
  }
  for (double p : img.pixels)
    if (p < 0 || p > img.maxval)
      throw std::runtime_error(path + ": pixel out of range");
  return img;
}

void pgm_write(const std::string& path, int width, int height,
               const std::vector<double>& values01) {
  if (size_t(width) * height != values01.size())
    throw std::invalid_argument("pgm_write: size mismatch");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "P5\n" << width << " " << height << "\n255\n";
  for (double v : values01) {
    double c = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    out.put(char(uint8_t(c * 255.0 + 0.5)));
  }
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace qiren
