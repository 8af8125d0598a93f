#pragma once

#include <string>

#include "grid.hpp"

namespace houghradon {

/// Reads a binary 8-bit PGM ("P5", maxval 255). Pixel byte v maps to v/255.
Image read_pgm(const std::string& path);

/// Writes a binary 8-bit PGM. Values are clamped to [0,1] and quantized by
/// round(v*255), half away from zero.
void write_pgm(const Image& img, const std::string& path);

}  // namespace houghradon
