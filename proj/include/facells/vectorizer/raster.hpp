// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace facells::vectorizer {

/// Row-major 8-bit grayscale image.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  RasterImage() = default;
  /// Throws DataError when the dimensions are not positive or do not match
  /// the pixel count.
  RasterImage(int w, int h, std::vector<std::uint8_t> px);
  RasterImage(int w, int h, std::uint8_t fill);

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Binary P5 PGM with maxval <= 255; comments are skipped.
RasterImage read_pgm(std::istream& in);
RasterImage read_pgm(const std::filesystem::path& path);
void write_pgm(std::ostream& out, const RasterImage& img);
void write_pgm(const std::filesystem::path& path, const RasterImage& img);

}  // namespace facells::vectorizer
