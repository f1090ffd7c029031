// SPDX-License-Identifier: Apache-2.0
#include "facells/vectorizer/raster.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "facells/error.hpp"

namespace facells::vectorizer {

RasterImage::RasterImage(int w, int h, std::vector<std::uint8_t> px)
    : width(w), height(h), pixels(std::move(px)) {
  if (w <= 0 || h <= 0) throw DataError("image dimensions must be positive");
  if (pixels.size() != static_cast<std::size_t>(w) * static_cast<std::size_t>(h)) {
    throw DataError("pixel count does not match width x height");
  }
}

RasterImage::RasterImage(int w, int h, std::uint8_t fill)
    : RasterImage(w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w > 0 ? w : 0) *
                                                      static_cast<std::size_t>(h > 0 ? h : 0),
                                                  fill)) {}

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int header_int(std::istream& in, const char* what) {
  const std::string tok = header_token(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw DataError(std::string("PGM: bad ") + what + " '" + tok + "'");
  }
}

}  // namespace

RasterImage read_pgm(std::istream& in) {
  if (header_token(in) != "P5") throw DataError("PGM: expected binary P5 magic");
  const int w = header_int(in, "width");
  const int h = header_int(in, "height");
  const int maxval = header_int(in, "maxval");
  if (maxval <= 0 || maxval > 255) throw DataError("PGM: only 8-bit images are supported");
  if (w <= 0 || h <= 0) throw DataError("PGM: dimensions must be positive");
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (in.gcount() != static_cast<std::streamsize>(px.size())) {
    throw DataError("PGM: truncated pixel data");
  }
  if (maxval != 255) {
    for (auto& v : px) v = static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
  }
  return RasterImage(w, h, std::move(px));
}

RasterImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_pgm(in);
}

void write_pgm(std::ostream& out, const RasterImage& img) {
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
}

void write_pgm(const std::filesystem::path& path, const RasterImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_pgm(out, img);
}

}  // namespace facells::vectorizer
