#include "network.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <utility>

#include "errors.hpp"
#include "metrics.hpp"
#include "rng.hpp"
#include "tensor_io.hpp"

namespace fs = std::filesystem;

namespace houghradon {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

int scaled(int base, int div) { return std::max(1, base / div); }

// Glorot-uniform noise plus a center-tap pass-through (Dirac kernel). The
// narrow reduced variants otherwise land, for some seeds, on dead-signal
// saddles where every layer's effective gain is near zero and training never
// escapes the base-rate plateau; the identity component guarantees signal
// propagation at any seed.
void conv_init(ConvWeights& p, Rng& rng) {
  const double fan_in = p.in_c * 9.0;
  const double fan_out = p.out_c * 9.0;
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& v : p.w) v = rng.uniform(-limit, limit);
  for (int oc = 0; oc < p.out_c; ++oc) p.at(oc, oc % p.in_c, 1, 1) += 1.0;
  for (double& v : p.b) v = 0.0;
}

FeatureMap image_as_featuremap(const Image& img) {
  FeatureMap fm(1, img.height, img.width);
  fm.set_channel(0, img);
  return fm;
}

}  // namespace

Network::Network(const NetworkSpec& spec, uint64_t seed) : spec_(spec) {
  if (!is_power_of_two(spec.input_size) || spec.input_size < 16)
    throw ArgumentError("Network: input_size must be a power of two >= 16");
  if (spec.n < 1 || !(spec.scale_x > 0.0)) throw ArgumentError("Network: bad n or scaleX");
  if (spec.width_div < 1) throw ArgumentError("Network: width_div must be >= 1");

  const int d = spec.width_div;
  const int c4 = scaled(4, d), c8 = scaled(8, d), c16 = scaled(16, d);
  const int h = spec.input_size / 4;
  map_ = std::make_shared<RadonHoughMap>(build_map(h, spec.n, spec.scale_x));
  // The fixed transforms accumulate up to h (FHT) and 4h-3 (TFHT) terms per
  // cell; the layers carry matching 1/sqrt(fan-in) constants so activation
  // variance survives the transform stack. Each stays linear with an exact
  // adjoint backward.
  fht_scale_ = 1.0 / std::sqrt(static_cast<double>(h));
  tfht_scale_ = 1.0 / std::sqrt(static_cast<double>(hough_rows(h)));

  Rng rng(seed);
  auto conv = [&](int in, int out, int upscale, Activation act) {
    Layer l;
    l.kind = Layer::Kind::Conv;
    l.spec = ConvSpec{in, out, upscale, act};
    l.params = ConvWeights(out, in);
    l.grads = ConvWeights(out, in);
    conv_init(l.params, rng);
    layers_.push_back(std::move(l));
  };
  auto fixed = [&](Layer::Kind kind) {
    Layer l;
    l.kind = kind;
    layers_.push_back(std::move(l));
  };

  conv(1, c4, 1, Activation::Softsign);
  conv(c4, c8, 1, Activation::Softsign);
  fixed(Layer::Kind::Pool);
  conv(c8, c16, 1, Activation::Softsign);
  conv(c16, c16, 1, Activation::Softsign);
  fixed(Layer::Kind::Pool);
  fixed(Layer::Kind::Fht);
  fixed(Layer::Kind::Hrt);
  for (int k = 0; k < 4; ++k) conv(c16, c16, 1, Activation::Softsign);
  fixed(Layer::Kind::Rht);
  fixed(Layer::Kind::Tfht);
  conv(c16, c8, 2, Activation::Softsign);
  conv(c8, c4, 2, Activation::Softsign);
  conv(c4, c4, 1, Activation::Softsign);
  conv(c4, 2, 1, Activation::Softmax);  // head; softmax applied in forward()
}

FeatureMap Network::forward_logits(const Image& input) {
  if (input.height != spec_.input_size || input.width != spec_.input_size)
    throw ArgumentError("Network: input must be " + std::to_string(spec_.input_size) + "^2");

  FeatureMap x = image_as_featuremap(input);
  // fixed affine input normalization: [0,1] -> [-1,1]
  for (double& v : x.values) v = 2.0 * v - 1.0;
  for (Layer& l : layers_) {
    switch (l.kind) {
      case Layer::Kind::Conv: {
        l.cached_input = x;
        FeatureMap y = conv2d_forward(x, l.spec, l.params);
        if (l.spec.activation == Activation::Softsign) {
          y = softsign(y);
          l.cached_output = y;
        }
        x = std::move(y);
        break;
      }
      case Layer::Kind::Pool:
        l.pool_in_h = x.height;
        l.pool_in_w = x.width;
        x = avgpool2_forward(x);
        break;
      case Layer::Kind::Fht:
        x = fht_featuremap(x);
        for (double& v : x.values) v *= fht_scale_;
        break;
      case Layer::Kind::Hrt:
        x = hrt_featuremap(x, *map_);
        break;
      case Layer::Kind::Rht:
        x = rht_featuremap(x, *map_);
        break;
      case Layer::Kind::Tfht:
        x = tfht_featuremap(x);
        for (double& v : x.values) v *= tfht_scale_;
        break;
    }
  }
  return x;
}

FeatureMap Network::forward(const Image& input) { return softmax_channels(forward_logits(input)); }

FeatureMap Network::backward(const FeatureMap& grad_logits) {
  FeatureMap g = grad_logits;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
    Layer& l = *it;
    switch (l.kind) {
      case Layer::Kind::Conv: {
        if (l.spec.activation == Activation::Softsign) g = softsign_backward(g, l.cached_output);
        ConvGrads cg = conv2d_backward(g, l.cached_input, l.spec, l.params);
        for (size_t i = 0; i < l.grads.w.size(); ++i) l.grads.w[i] += cg.params.w[i];
        for (size_t i = 0; i < l.grads.b.size(); ++i) l.grads.b[i] += cg.params.b[i];
        g = std::move(cg.input);
        break;
      }
      case Layer::Kind::Pool:
        g = avgpool2_backward(g, l.pool_in_h, l.pool_in_w);
        break;
      case Layer::Kind::Fht:
        g = tfht_featuremap(g);
        for (double& v : g.values) v *= corrupt_adjoint_ ? fht_scale_ * 1.02 : fht_scale_;
        break;
      case Layer::Kind::Hrt:
        g = rht_featuremap(g, *map_);
        break;
      case Layer::Kind::Rht:
        g = hrt_featuremap(g, *map_);
        break;
      case Layer::Kind::Tfht:
        g = fht_featuremap(g);
        for (double& v : g.values) v *= tfht_scale_;
        break;
    }
  }
  // chain through the input normalization
  for (double& v : g.values) v *= 2.0;
  return g;
}

void Network::zero_grads() {
  for (Layer& l : layers_) {
    std::fill(l.grads.w.begin(), l.grads.w.end(), 0.0);
    std::fill(l.grads.b.begin(), l.grads.b.end(), 0.0);
  }
}

void Network::scale_grads(double factor) {
  for (Layer& l : layers_) {
    for (double& v : l.grads.w) v *= factor;
    for (double& v : l.grads.b) v *= factor;
  }
}

void Network::adam_update(double lr) {
  for (Layer& l : layers_) {
    if (l.kind != Layer::Kind::Conv) continue;
    adam_step(l.params.w, l.grads.w, l.adam_w, lr, kAdamBeta1, kAdamBeta2, kAdamEps);
    adam_step(l.params.b, l.grads.b, l.adam_b, lr, kAdamBeta1, kAdamBeta2, kAdamEps);
  }
}

uint64_t Network::param_count() const {
  uint64_t total = 0;
  for (const Layer& l : layers_)
    if (l.kind == Layer::Kind::Conv) total += l.params.param_count();
  return total;
}

std::pair<int, int> Network::inner_shape() const {
  return {spec_.n, radon_width(spec_.input_size / 4, spec_.scale_x)};
}

void Network::save_checkpoint(const std::string& dir) const {
  fs::create_directories(dir);
  std::ofstream manifest(fs::path(dir) / "manifest.txt");
  if (!manifest) throw IoError("checkpoint: cannot write manifest in " + dir);

  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", spec_.scale_x);
  manifest << "houghradon-checkpoint 1\n"
           << "input_size " << spec_.input_size << "\n"
           << "n " << spec_.n << "\n"
           << "scale_x " << buf << "\n"
           << "width_div " << spec_.width_div << "\n";

  int conv_idx = 0;
  for (const Layer& l : layers_) {
    if (l.kind != Layer::Kind::Conv) continue;
    manifest << "conv " << conv_idx << " in " << l.spec.in_channels << " out "
             << l.spec.out_channels << " upscale " << l.spec.upscale << "\n";

    FeatureMap w(l.params.out_c * l.params.in_c, 3, 3);
    w.values.assign(l.params.w.begin(), l.params.w.end());
    FeatureMap b(l.params.out_c, 1, 1);
    b.values.assign(l.params.b.begin(), l.params.b.end());
    std::snprintf(buf, sizeof buf, "conv%02d_w.tensor", conv_idx);
    write_tensor(w, (fs::path(dir) / buf).string());
    std::snprintf(buf, sizeof buf, "conv%02d_b.tensor", conv_idx);
    write_tensor(b, (fs::path(dir) / buf).string());
    ++conv_idx;
  }
}

Network Network::load_checkpoint(const std::string& dir) {
  std::ifstream manifest(fs::path(dir) / "manifest.txt");
  if (!manifest) throw IoError("checkpoint: cannot open manifest in " + dir);

  std::string word;
  int version = 0;
  manifest >> word >> version;
  if (word != "houghradon-checkpoint" || version != 1)
    throw FormatError("checkpoint: unrecognized manifest header in " + dir);

  NetworkSpec spec;
  manifest >> word >> spec.input_size;
  if (word != "input_size") throw FormatError("checkpoint: expected input_size");
  manifest >> word >> spec.n;
  if (word != "n") throw FormatError("checkpoint: expected n");
  manifest >> word >> spec.scale_x;
  if (word != "scale_x") throw FormatError("checkpoint: expected scale_x");
  manifest >> word >> spec.width_div;
  if (word != "width_div") throw FormatError("checkpoint: expected width_div");

  Network net(spec, 0);
  char buf[64];
  int conv_idx = 0;
  for (Layer& l : net.layers_) {
    if (l.kind != Layer::Kind::Conv) continue;
    int idx, in, out, upscale;
    manifest >> word >> idx;
    if (word != "conv" || idx != conv_idx) throw FormatError("checkpoint: conv list mismatch");
    manifest >> word >> in >> word >> out >> word >> upscale;
    if (in != l.spec.in_channels || out != l.spec.out_channels || upscale != l.spec.upscale)
      throw FormatError("checkpoint: conv " + std::to_string(idx) + " shape mismatch");

    std::snprintf(buf, sizeof buf, "conv%02d_w.tensor", conv_idx);
    const FeatureMap w = read_tensor((fs::path(dir) / buf).string());
    std::snprintf(buf, sizeof buf, "conv%02d_b.tensor", conv_idx);
    const FeatureMap b = read_tensor((fs::path(dir) / buf).string());
    if (w.size() != l.params.w.size() || b.size() != l.params.b.size())
      throw FormatError("checkpoint: tensor size mismatch for conv " + std::to_string(idx));
    l.params.w.assign(w.values.begin(), w.values.end());
    l.params.b.assign(b.values.begin(), b.values.end());
    ++conv_idx;
  }
  return net;
}

std::vector<EpochLog> train(Network& net, const std::vector<Sample>& dataset, int epochs,
                            double lr, uint64_t seed, int batch_size) {
  if (dataset.empty()) throw ArgumentError("train: dataset is empty");
  if (batch_size < 1) throw ArgumentError("train: batch_size must be positive");
  std::vector<int> train_idx;
  int test_count = 0;
  for (size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].split == Split::Train)
      train_idx.push_back(static_cast<int>(i));
    else
      ++test_count;
  }
  if (train_idx.empty()) throw ArgumentError("train: dataset has no training samples");

  Rng rng(seed);
  std::vector<EpochLog> log;
  for (int epoch = 1; epoch <= epochs; ++epoch) {
    rng.shuffle(train_idx);
    double loss_sum = 0.0;
    for (size_t start = 0; start < train_idx.size(); start += static_cast<size_t>(batch_size)) {
      const size_t stop = std::min(train_idx.size(), start + static_cast<size_t>(batch_size));
      net.zero_grads();
      for (size_t k = start; k < stop; ++k) {
        const Sample& s = dataset[static_cast<size_t>(train_idx[k])];
        const FeatureMap logits = net.forward_logits(s.image);
        const FeatureMap probs = softmax_channels(logits);
        LossResult lres = cross_entropy_loss(probs, s.mask);
        loss_sum += lres.loss;
        net.backward(lres.grad_logits);
      }
      net.scale_grads(1.0 / static_cast<double>(stop - start));
      net.adam_update(lr);
    }
    EpochLog entry;
    entry.epoch = epoch;
    entry.loss = loss_sum / static_cast<double>(train_idx.size());
    entry.miou = test_count > 0 ? evaluate(net, dataset, Split::Test) : 0.0;
    log.push_back(entry);
  }
  return log;
}

double evaluate(Network& net, const std::vector<Sample>& dataset, Split split) {
  double sum = 0.0;
  int count = 0;
  for (const Sample& s : dataset) {
    if (s.split != split) continue;
    const FeatureMap probs = net.forward(s.image);
    sum += miou(argmax_labels(probs), s.mask);
    ++count;
  }
  if (count == 0) throw ArgumentError("evaluate: no samples in the requested split");
  return sum / count;
}

void write_training_log(const std::vector<EpochLog>& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("training log: cannot open " + path);
  out << "epoch,loss,miou\n";
  char buf[96];
  for (const EpochLog& e : log) {
    std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f\n", e.epoch, e.loss, e.miou);
    out << buf;
  }
}

}  // namespace houghradon
