#pragma once

#include "grid.hpp"

namespace houghradon {

/// Mean intersection-over-union of two binary label maps over the two
/// classes {0, 1}. A class absent from both maps contributes IoU = 1.
double miou(const Image& prediction, const Image& truth);

/// Per-pixel argmax over a 2-channel probability map; exact ties resolve
/// to class 0.
Image argmax_labels(const FeatureMap& probs);

}  // namespace houghradon
