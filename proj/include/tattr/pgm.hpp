#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tattr/error.hpp"

namespace tattr {

/// 8-bit grayscale image, row-major.
struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;  // height * width bytes

  std::uint8_t at(int r, int c) const { return pixels[r * width + c]; }
};

/// Writes binary PGM: "P5\n<width> <height>\n255\n" followed by height*width
/// raw bytes in row-major order.
void write_pgm(const GrayImage& img, const std::string& path);

/// Reads binary (P5) or ASCII (P2) PGM with maxval <= 255.
GrayImage read_pgm(const std::string& path);

}  // namespace tattr
