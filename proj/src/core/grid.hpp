#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"

namespace houghradon {

/// Single-channel 2D grid of real values, row-major (row = y, column = x).
struct Image {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  Image() = default;
  Image(int h, int w) : height(h), width(w), values(static_cast<size_t>(h) * w, 0.0) {
    if (h <= 0 || w <= 0) throw ArgumentError("Image: dimensions must be positive");
  }

  double& at(int y, int x) { return values[static_cast<size_t>(y) * width + x]; }
  double at(int y, int x) const { return values[static_cast<size_t>(y) * width + x]; }
  size_t size() const { return values.size(); }
};

/// Stack of channels × height × width, row-major within each channel.
struct FeatureMap {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> values;

  FeatureMap() = default;
  FeatureMap(int c, int h, int w)
      : channels(c), height(h), width(w), values(static_cast<size_t>(c) * h * w, 0.0) {
    if (c <= 0 || h <= 0 || w <= 0) throw ArgumentError("FeatureMap: dimensions must be positive");
  }

  double& at(int c, int y, int x) {
    return values[(static_cast<size_t>(c) * height + y) * width + x];
  }
  double at(int c, int y, int x) const {
    return values[(static_cast<size_t>(c) * height + y) * width + x];
  }
  size_t size() const { return values.size(); }

  /// View of one channel as an Image (copy).
  Image channel(int c) const {
    Image out(height, width);
    const size_t off = static_cast<size_t>(c) * height * width;
    std::copy(values.begin() + off, values.begin() + off + static_cast<size_t>(height) * width,
              out.values.begin());
    return out;
  }

  void set_channel(int c, const Image& img) {
    if (img.height != height || img.width != width)
      throw ArgumentError("FeatureMap::set_channel: shape mismatch");
    std::copy(img.values.begin(), img.values.end(),
              values.begin() + static_cast<size_t>(c) * height * width);
  }
};

inline bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace houghradon
