#pragma once

#include <string>

#include "grid.hpp"

namespace houghradon {

// Raw tensor container: 16-byte header (magic "HRT1", then channels, height,
// width as u32 little-endian) followed by float32 little-endian values in
// (c, y, x) order.

FeatureMap read_tensor(const std::string& path);
void write_tensor(const FeatureMap& fm, const std::string& path);

/// Single-image convenience wrappers (channels == 1).
Image read_tensor_image(const std::string& path);
void write_tensor_image(const Image& img, const std::string& path);

}  // namespace houghradon
