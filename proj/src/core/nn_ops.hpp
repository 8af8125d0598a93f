#pragma once

#include <cstdint>
#include <vector>

#include "grid.hpp"

namespace houghradon {

enum class Activation { None, Softsign, Softmax };

/// 3x3 convolution, stride 1, padding 1, optional nearest-neighbor 2x
/// pre-upsampling. The activation is metadata applied by the network graph,
/// not by conv2d_forward itself.
struct ConvSpec {
  int in_channels = 1;
  int out_channels = 1;
  int upscale = 1;  // 1 or 2
  Activation activation = Activation::Softsign;
};

struct ConvWeights {
  int out_c = 0;
  int in_c = 0;
  std::vector<double> w;  // (oc, ic, ky, kx), 3x3 kernels
  std::vector<double> b;  // (oc)

  ConvWeights() = default;
  ConvWeights(int oc, int ic)
      : out_c(oc), in_c(ic), w(static_cast<size_t>(oc) * ic * 9, 0.0), b(static_cast<size_t>(oc), 0.0) {}

  double& at(int oc, int ic, int ky, int kx) {
    return w[((static_cast<size_t>(oc) * in_c + ic) * 3 + ky) * 3 + kx];
  }
  double at(int oc, int ic, int ky, int kx) const {
    return w[((static_cast<size_t>(oc) * in_c + ic) * 3 + ky) * 3 + kx];
  }
  size_t param_count() const { return w.size() + b.size(); }
};

struct ConvGrads {
  FeatureMap input;    // gradient w.r.t. the pre-upsample input
  ConvWeights params;  // gradients in the same layout as the weights
};

FeatureMap upsample2_nearest(const FeatureMap& fm);
/// Adjoint of upsample2_nearest: sums each 2x2 block.
FeatureMap downsample2_sum(const FeatureMap& fm);

FeatureMap conv2d_forward(const FeatureMap& input, const ConvSpec& spec, const ConvWeights& params);
ConvGrads conv2d_backward(const FeatureMap& grad_out, const FeatureMap& input,
                          const ConvSpec& spec, const ConvWeights& params);

/// Elementwise x / (1 + |x|).
FeatureMap softsign(const FeatureMap& fm);
/// Backward from the cached output: dy/dx = (1 - |y|)^2.
FeatureMap softsign_backward(const FeatureMap& grad_out, const FeatureMap& output);

/// Per-pixel softmax over channels, computed with max subtraction.
FeatureMap softmax_channels(const FeatureMap& fm);
/// Jacobian-vector product: g_i = p_i * (gy_i - sum_k p_k gy_k).
FeatureMap softmax_backward(const FeatureMap& grad_out, const FeatureMap& probs);

struct LossResult {
  double loss = 0.0;
  FeatureMap grad_logits;  // gradient w.r.t. the pre-softmax activations
};

/// Mean pixelwise negative log-likelihood of a 2-channel softmax output
/// against a binary mask; probabilities are clamped at 1e-12 before log.
LossResult cross_entropy_loss(const FeatureMap& probs, const Image& mask);

FeatureMap avgpool2_forward(const FeatureMap& fm);
FeatureMap avgpool2_backward(const FeatureMap& grad_out, int in_h, int in_w);

struct AdamState {
  int64_t step = 0;
  std::vector<double> m;
  std::vector<double> v;
};

/// One Adam update with bias correction; state grows lazily to match params.
void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               double lr, double beta1, double beta2, double eps);

/// Multiply-accumulate count of one 16->16 3x3 convolution over a W x H map.
inline uint64_t inner_ops_count(int width, int height) {
  return static_cast<uint64_t>(width) * height * 16ull * 16ull * 3ull * 3ull;
}

/// Table display rule for ops in units of 1e7: one decimal below 10,
/// integers at or above 10.
std::string format_ops(uint64_t ops);

}  // namespace houghradon
