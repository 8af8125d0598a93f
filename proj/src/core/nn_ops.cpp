#include "nn_ops.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "errors.hpp"

namespace houghradon {

FeatureMap upsample2_nearest(const FeatureMap& fm) {
  FeatureMap out(fm.channels, fm.height * 2, fm.width * 2);
  for (int c = 0; c < fm.channels; ++c)
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x) out.at(c, y, x) = fm.at(c, y / 2, x / 2);
  return out;
}

FeatureMap downsample2_sum(const FeatureMap& fm) {
  FeatureMap out(fm.channels, fm.height / 2, fm.width / 2);
  for (int c = 0; c < fm.channels; ++c)
    for (int y = 0; y < fm.height; ++y)
      for (int x = 0; x < fm.width; ++x) out.at(c, y / 2, x / 2) += fm.at(c, y, x);
  return out;
}

FeatureMap conv2d_forward(const FeatureMap& input, const ConvSpec& spec, const ConvWeights& params) {
  if (input.channels != spec.in_channels)
    throw ArgumentError("conv2d_forward: input has " + std::to_string(input.channels) +
                        " channels, spec wants " + std::to_string(spec.in_channels));
  FeatureMap up;
  const FeatureMap* in = &input;
  if (spec.upscale == 2) {
    up = upsample2_nearest(input);
    in = &up;
  }
  const int H = in->height, W = in->width;
  FeatureMap out(spec.out_channels, H, W);
  for (int oc = 0; oc < spec.out_channels; ++oc) {
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) out.at(oc, y, x) = params.b[static_cast<size_t>(oc)];
    for (int ic = 0; ic < spec.in_channels; ++ic)
      for (int ky = 0; ky < 3; ++ky)
        for (int kx = 0; kx < 3; ++kx) {
          const double wv = params.at(oc, ic, ky, kx);
          if (wv == 0.0) continue;
          const int y_lo = std::max(0, 1 - ky), y_hi = std::min(H, H + 1 - ky);
          const int x_lo = std::max(0, 1 - kx), x_hi = std::min(W, W + 1 - kx);
          for (int y = y_lo; y < y_hi; ++y) {
            const double* in_row = &in->values[(static_cast<size_t>(ic) * H + y + ky - 1) * W];
            double* out_row = &out.values[(static_cast<size_t>(oc) * H + y) * W];
            for (int x = x_lo; x < x_hi; ++x) out_row[x] += wv * in_row[x + kx - 1];
          }
        }
  }
  return out;
}

ConvGrads conv2d_backward(const FeatureMap& grad_out, const FeatureMap& input,
                          const ConvSpec& spec, const ConvWeights& params) {
  if (input.channels != spec.in_channels || grad_out.channels != spec.out_channels)
    throw ArgumentError("conv2d_backward: channel mismatch");
  FeatureMap up;
  const FeatureMap* in = &input;
  if (spec.upscale == 2) {
    up = upsample2_nearest(input);
    in = &up;
  }
  const int H = in->height, W = in->width;
  if (grad_out.height != H || grad_out.width != W)
    throw ArgumentError("conv2d_backward: grad shape mismatch");

  ConvGrads grads;
  grads.params = ConvWeights(spec.out_channels, spec.in_channels);
  FeatureMap grad_in(spec.in_channels, H, W);

  for (int oc = 0; oc < spec.out_channels; ++oc) {
    double gb = 0.0;
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) gb += grad_out.at(oc, y, x);
    grads.params.b[static_cast<size_t>(oc)] = gb;

    for (int ic = 0; ic < spec.in_channels; ++ic)
      for (int ky = 0; ky < 3; ++ky)
        for (int kx = 0; kx < 3; ++kx) {
          const double wv = params.at(oc, ic, ky, kx);
          double gw = 0.0;
          const int y_lo = std::max(0, 1 - ky), y_hi = std::min(H, H + 1 - ky);
          const int x_lo = std::max(0, 1 - kx), x_hi = std::min(W, W + 1 - kx);
          for (int y = y_lo; y < y_hi; ++y) {
            const double* in_row = &in->values[(static_cast<size_t>(ic) * H + y + ky - 1) * W];
            double* gin_row = &grad_in.values[(static_cast<size_t>(ic) * H + y + ky - 1) * W];
            const double* g_row = &grad_out.values[(static_cast<size_t>(oc) * H + y) * W];
            for (int x = x_lo; x < x_hi; ++x) {
              gw += g_row[x] * in_row[x + kx - 1];
              gin_row[x + kx - 1] += wv * g_row[x];
            }
          }
          grads.params.at(oc, ic, ky, kx) = gw;
        }
  }
  grads.input = spec.upscale == 2 ? downsample2_sum(grad_in) : std::move(grad_in);
  return grads;
}

FeatureMap softsign(const FeatureMap& fm) {
  FeatureMap out = fm;
  for (double& v : out.values) v = v / (1.0 + std::abs(v));
  return out;
}

FeatureMap softsign_backward(const FeatureMap& grad_out, const FeatureMap& output) {
  FeatureMap grad = grad_out;
  for (size_t i = 0; i < grad.size(); ++i) {
    const double d = 1.0 - std::abs(output.values[i]);
    grad.values[i] *= d * d;
  }
  return grad;
}

FeatureMap softmax_channels(const FeatureMap& fm) {
  if (fm.channels < 1) throw ArgumentError("softmax_channels: need at least one channel");
  FeatureMap out = fm;
  const size_t plane = static_cast<size_t>(fm.height) * fm.width;
  for (size_t px = 0; px < plane; ++px) {
    double mx = fm.values[px];
    for (int c = 1; c < fm.channels; ++c) mx = std::max(mx, fm.values[c * plane + px]);
    double sum = 0.0;
    for (int c = 0; c < fm.channels; ++c) {
      const double e = std::exp(fm.values[c * plane + px] - mx);
      out.values[c * plane + px] = e;
      sum += e;
    }
    for (int c = 0; c < fm.channels; ++c) out.values[c * plane + px] /= sum;
  }
  return out;
}

FeatureMap softmax_backward(const FeatureMap& grad_out, const FeatureMap& probs) {
  FeatureMap grad = grad_out;
  const size_t plane = static_cast<size_t>(probs.height) * probs.width;
  for (size_t px = 0; px < plane; ++px) {
    double dot = 0.0;
    for (int c = 0; c < probs.channels; ++c)
      dot += probs.values[c * plane + px] * grad_out.values[c * plane + px];
    for (int c = 0; c < probs.channels; ++c)
      grad.values[c * plane + px] = probs.values[c * plane + px] *
                                    (grad_out.values[c * plane + px] - dot);
  }
  return grad;
}

LossResult cross_entropy_loss(const FeatureMap& probs, const Image& mask) {
  if (probs.channels != 2) throw ArgumentError("cross_entropy_loss: expected 2 channels");
  if (probs.height != mask.height || probs.width != mask.width)
    throw ArgumentError("cross_entropy_loss: mask shape mismatch");

  LossResult res;
  res.grad_logits = FeatureMap(2, probs.height, probs.width);
  const size_t plane = static_cast<size_t>(probs.height) * probs.width;
  const double inv_n = 1.0 / static_cast<double>(plane);
  double loss = 0.0;
  for (size_t px = 0; px < plane; ++px) {
    const int cls = mask.values[px] != 0.0 ? 1 : 0;
    const double p = std::max(probs.values[cls * plane + px], 1e-12);
    loss -= std::log(p);
    for (int c = 0; c < 2; ++c) {
      const double onehot = c == cls ? 1.0 : 0.0;
      res.grad_logits.values[c * plane + px] = (probs.values[c * plane + px] - onehot) * inv_n;
    }
  }
  res.loss = loss * inv_n;
  return res;
}

FeatureMap avgpool2_forward(const FeatureMap& fm) {
  if (fm.height % 2 != 0 || fm.width % 2 != 0)
    throw ArgumentError("avgpool2_forward: dimensions must be even");
  FeatureMap out(fm.channels, fm.height / 2, fm.width / 2);
  for (int c = 0; c < fm.channels; ++c)
    for (int y = 0; y < fm.height; ++y)
      for (int x = 0; x < fm.width; ++x) out.at(c, y / 2, x / 2) += 0.25 * fm.at(c, y, x);
  return out;
}

FeatureMap avgpool2_backward(const FeatureMap& grad_out, int in_h, int in_w) {
  FeatureMap grad(grad_out.channels, in_h, in_w);
  for (int c = 0; c < grad.channels; ++c)
    for (int y = 0; y < in_h; ++y)
      for (int x = 0; x < in_w; ++x) grad.at(c, y, x) = 0.25 * grad_out.at(c, y / 2, x / 2);
  return grad;
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               double lr, double beta1, double beta2, double eps) {
  if (params.size() != grads.size()) throw ArgumentError("adam_step: size mismatch");
  if (state.m.size() != params.size()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
    state.step = 0;
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
  for (size_t i = 0; i < params.size(); ++i) {
    state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grads[i];
    state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grads[i] * grads[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

std::string format_ops(uint64_t ops) {
  const double x = static_cast<double>(ops) / 1e7;
  const double one_dp = std::round(x * 10.0) / 10.0;
  char buf[32];
  if (one_dp < 10.0)
    std::snprintf(buf, sizeof buf, "%.1f", one_dp);
  else
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(std::llround(x)));
  return buf;
}

}  // namespace houghradon
