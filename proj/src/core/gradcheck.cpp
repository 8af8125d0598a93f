#include <cmath>
#include <functional>

#include "network.hpp"
#include "rng.hpp"

namespace houghradon {

namespace {

constexpr double kStep = 1e-5;

double rel_err(const std::vector<double>& analytic, const std::vector<double>& fd) {
  double diff = 0.0, na = 0.0, nf = 0.0;
  for (size_t i = 0; i < analytic.size(); ++i) {
    diff += (analytic[i] - fd[i]) * (analytic[i] - fd[i]);
    na += analytic[i] * analytic[i];
    nf += fd[i] * fd[i];
  }
  const double denom = std::max({std::sqrt(na), std::sqrt(nf), 1e-12});
  return std::sqrt(diff) / denom;
}

// Central finite differences over every slot, against a scalar functional.
std::vector<double> fd_gradient(std::vector<double*> slots, const std::function<double()>& f) {
  std::vector<double> grad(slots.size(), 0.0);
  for (size_t i = 0; i < slots.size(); ++i) {
    const double orig = *slots[i];
    *slots[i] = orig + kStep;
    const double up = f();
    *slots[i] = orig - kStep;
    const double dn = f();
    *slots[i] = orig;
    grad[i] = (up - dn) / (2.0 * kStep);
  }
  return grad;
}

std::vector<double*> all_slots(FeatureMap& fm) {
  std::vector<double*> slots;
  slots.reserve(fm.size());
  for (double& v : fm.values) slots.push_back(&v);
  return slots;
}

FeatureMap random_map(Rng& rng, int c, int h, int w, double lo = -1.0, double hi = 1.0) {
  FeatureMap fm(c, h, w);
  for (double& v : fm.values) v = rng.uniform(lo, hi);
  return fm;
}

double weighted_sum(const FeatureMap& y, const FeatureMap& r) {
  double acc = 0.0;
  for (size_t i = 0; i < y.size(); ++i) acc += y.values[i] * r.values[i];
  return acc;
}

GradCheckResult check_conv(Rng& rng, bool upscale) {
  const ConvSpec spec{3, 2, upscale ? 2 : 1, Activation::None};
  FeatureMap x = random_map(rng, 3, upscale ? 3 : 6, upscale ? 3 : 6);
  ConvWeights params(2, 3);
  for (double& v : params.w) v = rng.uniform(-1.0, 1.0);
  for (double& v : params.b) v = rng.uniform(-0.5, 0.5);
  const FeatureMap y0 = conv2d_forward(x, spec, params);
  const FeatureMap r = random_map(rng, y0.channels, y0.height, y0.width);

  const ConvGrads grads = conv2d_backward(r, x, spec, params);
  std::vector<double> analytic;
  for (const double v : grads.input.values) analytic.push_back(v);
  for (const double v : grads.params.w) analytic.push_back(v);
  for (const double v : grads.params.b) analytic.push_back(v);

  std::vector<double*> slots = all_slots(x);
  for (double& v : params.w) slots.push_back(&v);
  for (double& v : params.b) slots.push_back(&v);
  const auto f = [&]() { return weighted_sum(conv2d_forward(x, spec, params), r); };
  const std::vector<double> fd = fd_gradient(slots, f);

  GradCheckResult res;
  res.block = upscale ? "conv_upscale" : "conv";
  res.rel_err = rel_err(analytic, fd);
  res.threshold = 1e-4;
  res.passed = res.rel_err < res.threshold;
  return res;
}

GradCheckResult check_softsign(Rng& rng) {
  FeatureMap x = random_map(rng, 1, 4, 4, -2.0, 2.0);
  x.values[0] = 0.0;  // the stated gradient-at-zero case
  const FeatureMap r = random_map(rng, 1, 4, 4);
  const FeatureMap y = softsign(x);
  const FeatureMap g = softsign_backward(r, y);

  const auto f = [&]() { return weighted_sum(softsign(x), r); };
  const std::vector<double> fd = fd_gradient(all_slots(x), f);

  GradCheckResult res;
  res.block = "softsign";
  res.rel_err = rel_err(g.values, fd);
  res.threshold = 1e-4;
  res.passed = res.rel_err < res.threshold;
  return res;
}

GradCheckResult check_softmax(Rng& rng) {
  FeatureMap x = random_map(rng, 2, 3, 3, -2.0, 2.0);
  const FeatureMap r = random_map(rng, 2, 3, 3);
  const FeatureMap g = softmax_backward(r, softmax_channels(x));

  const auto f = [&]() { return weighted_sum(softmax_channels(x), r); };
  const std::vector<double> fd = fd_gradient(all_slots(x), f);

  GradCheckResult res;
  res.block = "softmax";
  res.rel_err = rel_err(g.values, fd);
  res.threshold = 1e-4;
  res.passed = res.rel_err < res.threshold;
  return res;
}

GradCheckResult check_loss(Rng& rng) {
  FeatureMap logits = random_map(rng, 2, 4, 4, -2.0, 2.0);
  Image mask(4, 4);
  for (double& v : mask.values) v = rng.uniform() < 0.5 ? 0.0 : 1.0;
  const LossResult lres = cross_entropy_loss(softmax_channels(logits), mask);

  const auto f = [&]() { return cross_entropy_loss(softmax_channels(logits), mask).loss; };
  const std::vector<double> fd = fd_gradient(all_slots(logits), f);

  GradCheckResult res;
  res.block = "cross_entropy";
  res.rel_err = rel_err(lres.grad_logits.values, fd);
  res.threshold = 1e-4;
  res.passed = res.rel_err < res.threshold;
  return res;
}

GradCheckResult check_fht_hrt(Rng& rng, bool corrupt) {
  const int h = 8;
  const RadonHoughMap map = build_map(h, 29, 1.0);
  FeatureMap x = random_map(rng, 1, h, h);
  const FeatureMap y0 = hrt_featuremap(fht_featuremap(x), map);
  const FeatureMap r = random_map(rng, y0.channels, y0.height, y0.width);

  FeatureMap g = tfht_featuremap(rht_featuremap(r, map));
  if (corrupt)
    for (double& v : g.values) v *= 1.02;

  const auto f = [&]() { return weighted_sum(hrt_featuremap(fht_featuremap(x), map), r); };
  const std::vector<double> fd = fd_gradient(all_slots(x), f);

  GradCheckResult res;
  res.block = "fht_hrt";
  res.rel_err = rel_err(g.values, fd);
  res.threshold = 1e-4;
  res.passed = res.rel_err < res.threshold;
  return res;
}

GradCheckResult check_rht_tfht(Rng& rng, bool corrupt) {
  const int h = 8;
  const RadonHoughMap map = build_map(h, 29, 1.0);
  FeatureMap x = random_map(rng, 1, map.n, map.width);
  const FeatureMap y0 = tfht_featuremap(rht_featuremap(x, map));
  const FeatureMap r = random_map(rng, y0.channels, y0.height, y0.width);

  FeatureMap g = hrt_featuremap(fht_featuremap(r), map);
  if (corrupt)
    for (double& v : g.values) v *= 1.02;

  const auto f = [&]() { return weighted_sum(tfht_featuremap(rht_featuremap(x, map)), r); };
  const std::vector<double> fd = fd_gradient(all_slots(x), f);

  GradCheckResult res;
  res.block = "rht_tfht";
  res.rel_err = rel_err(g.values, fd);
  res.threshold = 1e-4;
  res.passed = res.rel_err < res.threshold;
  return res;
}

GradCheckResult check_end_to_end(Rng& rng, int input_size, bool corrupt) {
  NetworkSpec spec;
  spec.input_size = input_size;
  spec.n = hough_rows(input_size / 4);
  spec.scale_x = 1.0;
  spec.width_div = 4;
  Network net(spec, 7);
  net.set_corrupt_adjoint(corrupt);

  Image input(input_size, input_size);
  for (double& v : input.values) v = rng.uniform();
  Image mask(input_size, input_size);
  for (double& v : mask.values) v = rng.uniform() < 0.5 ? 0.0 : 1.0;

  const auto loss_of = [&]() {
    Network* n = &net;
    return cross_entropy_loss(softmax_channels(n->forward_logits(input)), mask).loss;
  };

  net.zero_grads();
  const FeatureMap logits = net.forward_logits(input);
  const LossResult lres = cross_entropy_loss(softmax_channels(logits), mask);
  const FeatureMap grad_input = net.backward(lres.grad_logits);

  std::vector<double> analytic;
  std::vector<double*> slots;
  for (Network::Layer& l : net.layers()) {
    if (l.kind != Network::Layer::Kind::Conv) continue;
    for (size_t i = 0; i < l.params.w.size(); ++i) {
      analytic.push_back(l.grads.w[i]);
      slots.push_back(&l.params.w[i]);
    }
    for (size_t i = 0; i < l.params.b.size(); ++i) {
      analytic.push_back(l.grads.b[i]);
      slots.push_back(&l.params.b[i]);
    }
  }
  for (size_t i = 0; i < input.size(); ++i) {
    analytic.push_back(grad_input.values[i]);
    slots.push_back(&input.values[i]);
  }
  const std::vector<double> fd = fd_gradient(slots, loss_of);

  GradCheckResult res;
  res.block = "end_to_end";
  res.rel_err = rel_err(analytic, fd);
  res.threshold = 1e-3;
  res.passed = res.rel_err < res.threshold;
  return res;
}

}  // namespace

std::vector<GradCheckResult> run_gradcheck(int input_size, bool corrupt_adjoint) {
  Rng rng(20240229);
  std::vector<GradCheckResult> results;
  results.push_back(check_conv(rng, false));
  results.push_back(check_conv(rng, true));
  results.push_back(check_softsign(rng));
  results.push_back(check_softmax(rng));
  results.push_back(check_loss(rng));
  results.push_back(check_fht_hrt(rng, corrupt_adjoint));
  results.push_back(check_rht_tfht(rng, corrupt_adjoint));
  results.push_back(check_end_to_end(rng, input_size, corrupt_adjoint));
  return results;
}

}  // namespace houghradon
