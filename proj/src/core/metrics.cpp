#include "metrics.hpp"

#include <cstdint>

#include "errors.hpp"

namespace houghradon {

double miou(const Image& prediction, const Image& truth) {
  if (prediction.height != truth.height || prediction.width != truth.width)
    throw ArgumentError("miou: dimension mismatch");

  int64_t inter[2] = {0, 0};
  int64_t uni[2] = {0, 0};
  for (size_t i = 0; i < truth.size(); ++i) {
    const int p = prediction.values[i] != 0.0 ? 1 : 0;
    const int t = truth.values[i] != 0.0 ? 1 : 0;
    for (int cls = 0; cls < 2; ++cls) {
      const bool in_p = p == cls;
      const bool in_t = t == cls;
      if (in_p && in_t) ++inter[cls];
      if (in_p || in_t) ++uni[cls];
    }
  }
  double sum = 0.0;
  for (int cls = 0; cls < 2; ++cls)
    sum += uni[cls] == 0 ? 1.0 : static_cast<double>(inter[cls]) / static_cast<double>(uni[cls]);
  return sum / 2.0;
}

Image argmax_labels(const FeatureMap& probs) {
  if (probs.channels != 2) throw ArgumentError("argmax_labels: expected 2 channels");
  Image out(probs.height, probs.width);
  for (int y = 0; y < probs.height; ++y)
    for (int x = 0; x < probs.width; ++x)
      out.at(y, x) = probs.at(1, y, x) > probs.at(0, y, x) ? 1.0 : 0.0;
  return out;
}

}  // namespace houghradon
