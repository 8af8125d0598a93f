#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "data.hpp"
#include "grid.hpp"
#include "nn_ops.hpp"
#include "radon.hpp"

namespace houghradon {

/// Parameters of the 16-layer encoder/decoder: four convolutions, the
/// transform block (forward and transposed), four inner convolutions and a
/// four-convolution decoder with two 2x upscales. width_div shrinks every
/// channel count (except the 2-class head) for reduced desk-scale variants.
struct NetworkSpec {
  int input_size = 256;  // square, power of two, >= 16
  int n = 253;
  double scale_x = 0.711;
  int width_div = 1;  // 1 = full Table widths, 4 = quartered
};

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;
  double miou = 0.0;
};

class Network {
 public:
  Network(const NetworkSpec& spec, uint64_t seed);

  const NetworkSpec& spec() const { return spec_; }

  /// Full forward pass: 1 x S x S image -> 2 x S x S softmax probabilities.
  FeatureMap forward(const Image& input);

  /// Forward stopping before the softmax head (caches for backward).
  FeatureMap forward_logits(const Image& input);

  /// Backpropagates a gradient w.r.t. the logits through all layers,
  /// accumulating parameter gradients; returns the input gradient.
  FeatureMap backward(const FeatureMap& grad_logits);

  void zero_grads();
  void scale_grads(double factor);
  void adam_update(double lr);

  uint64_t param_count() const;

  /// Spatial shape produced by the transform block for this spec:
  /// {n, radon_width}.
  std::pair<int, int> inner_shape() const;

  /// Validation hook: scales the transform layers' backward pass so the
  /// adjoint identity is deliberately violated (negative control for
  /// gradient checking). Never set in normal operation.
  void set_corrupt_adjoint(bool v) { corrupt_adjoint_ = v; }

  void save_checkpoint(const std::string& dir) const;
  static Network load_checkpoint(const std::string& dir);

  struct Layer {
    enum class Kind { Conv, Pool, Fht, Hrt, Rht, Tfht } kind = Kind::Conv;
    ConvSpec spec;
    ConvWeights params;
    ConvWeights grads;
    AdamState adam_w;
    AdamState adam_b;
    // backward caches
    FeatureMap cached_input;
    FeatureMap cached_output;
    int pool_in_h = 0, pool_in_w = 0;
  };

  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }

 private:
  NetworkSpec spec_;
  std::vector<Layer> layers_;
  std::shared_ptr<const RadonHoughMap> map_;
  double fht_scale_ = 1.0;
  double tfht_scale_ = 1.0;
  bool corrupt_adjoint_ = false;
};

/// Epoch loop over the train split, one Adam update per mini-batch of
/// averaged gradients (fixed accumulation order); evaluates mean per-image
/// MIoU on the test split after every epoch. Deterministic for a fixed seed.
std::vector<EpochLog> train(Network& net, const std::vector<Sample>& dataset, int epochs,
                            double lr, uint64_t seed, int batch_size = 1);

/// Mean per-image MIoU of the network's argmax labels over one split.
/// (Non-const: forward passes reuse the network's layer caches.)
double evaluate(Network& net, const std::vector<Sample>& dataset, Split split);

void write_training_log(const std::vector<EpochLog>& log, const std::string& path);

struct GradCheckResult {
  std::string block;
  double rel_err = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// Central finite-difference checks (64-bit, step 1e-5) for each layer block
/// and for a reduced end-to-end network of the given input size.
std::vector<GradCheckResult> run_gradcheck(int input_size, bool corrupt_adjoint);

}  // namespace houghradon
