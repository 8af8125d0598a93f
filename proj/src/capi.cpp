// extern-C layer over the C++ core: opaque handles, status codes and a
// thread-local error message.

#include "houghradon.h"

#include <cstdio>
#include <cstring>
#include <string>

#include "core/data.hpp"
#include "core/errors.hpp"
#include "core/fht.hpp"
#include "core/grid.hpp"
#include "core/metrics.hpp"
#include "core/network.hpp"
#include "core/nn_ops.hpp"
#include "core/pgm_io.hpp"
#include "core/radon.hpp"
#include "core/rng.hpp"
#include "core/tensor_io.hpp"

using namespace houghradon;

struct hr_tensor {
  FeatureMap fm;
};

struct hr_dataset {
  std::vector<Sample> samples;
};

struct hr_network {
  Network net;
};

namespace {

thread_local std::string g_last_error;

hr_status fail(hr_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
hr_status guarded(Fn&& fn) {
  try {
    fn();
    return HR_OK;
  } catch (const ArgumentError& e) {
    return fail(HR_ERROR_ARGUMENT, e.what());
  } catch (const FormatError& e) {
    return fail(HR_ERROR_FORMAT, e.what());
  } catch (const IoError& e) {
    return fail(HR_ERROR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(HR_ERROR_INTERNAL, e.what());
  }
}

hr_status require(bool cond, const char* what) {
  return cond ? HR_OK : fail(HR_ERROR_ARGUMENT, what);
}

Image tensor_channel0(const hr_tensor* t, const char* op) {
  if (t->fm.channels != 1)
    throw ArgumentError(std::string(op) + ": expected a single-channel tensor");
  return t->fm.channel(0);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

extern "C" {

const char* hr_version(void) { return "houghradon 1.0.0"; }

const char* hr_last_error(void) { return g_last_error.c_str(); }

hr_status hr_tensor_create(uint32_t channels, uint32_t height, uint32_t width, hr_tensor** out) {
  if (hr_status s = require(out != nullptr, "hr_tensor_create: out is NULL")) return s;
  return guarded([&] {
    *out = new hr_tensor{FeatureMap(static_cast<int>(channels), static_cast<int>(height),
                                    static_cast<int>(width))};
  });
}

void hr_tensor_destroy(hr_tensor* t) { delete t; }

uint32_t hr_tensor_channels(const hr_tensor* t) { return static_cast<uint32_t>(t->fm.channels); }
uint32_t hr_tensor_height(const hr_tensor* t) { return static_cast<uint32_t>(t->fm.height); }
uint32_t hr_tensor_width(const hr_tensor* t) { return static_cast<uint32_t>(t->fm.width); }
double* hr_tensor_data(hr_tensor* t) { return t->fm.values.data(); }
const double* hr_tensor_cdata(const hr_tensor* t) { return t->fm.values.data(); }

hr_status hr_tensor_read_pgm(const char* path, hr_tensor** out) {
  if (hr_status s = require(path && out, "hr_tensor_read_pgm: NULL argument")) return s;
  return guarded([&] {
    const Image img = read_pgm(path);
    FeatureMap fm(1, img.height, img.width);
    fm.set_channel(0, img);
    *out = new hr_tensor{std::move(fm)};
  });
}

hr_status hr_tensor_write_pgm(const hr_tensor* t, const char* path) {
  if (hr_status s = require(t && path, "hr_tensor_write_pgm: NULL argument")) return s;
  return guarded([&] { write_pgm(tensor_channel0(t, "hr_tensor_write_pgm"), path); });
}

hr_status hr_tensor_read(const char* path, hr_tensor** out) {
  if (hr_status s = require(path && out, "hr_tensor_read: NULL argument")) return s;
  return guarded([&] { *out = new hr_tensor{read_tensor(path)}; });
}

hr_status hr_tensor_write(const hr_tensor* t, const char* path) {
  if (hr_status s = require(t && path, "hr_tensor_write: NULL argument")) return s;
  return guarded([&] { write_tensor(t->fm, path); });
}

hr_status hr_fht(const hr_tensor* in, int naive, hr_tensor** out) {
  if (hr_status s = require(in && out, "hr_fht: NULL argument")) return s;
  return guarded([&] {
    const FeatureMap& fm = in->fm;
    if (fm.height != fm.width || !is_power_of_two(fm.height))
      throw ArgumentError("hr_fht: channels must be square with power-of-two side, got " +
                          std::to_string(fm.height) + "x" + std::to_string(fm.width));
    FeatureMap res(fm.channels, hough_rows(fm.height), hough_cols(fm.height));
    for (int c = 0; c < fm.channels; ++c) {
      const Image img = fm.channel(c);
      res.set_channel(c, naive ? naive_fht_full(img).grid : fht_full(img).grid);
    }
    *out = new hr_tensor{std::move(res)};
  });
}

hr_status hr_tfht(const hr_tensor* in, hr_tensor** out) {
  if (hr_status s = require(in && out, "hr_tfht: NULL argument")) return s;
  return guarded([&] { *out = new hr_tensor{tfht_featuremap(in->fm)}; });
}

hr_status hr_hrt(const hr_tensor* in, uint32_t n, double scale_x, hr_tensor** out) {
  if (hr_status s = require(in && out, "hr_hrt: NULL argument")) return s;
  return guarded([&] {
    *out = new hr_tensor{hrt_featuremap(in->fm, static_cast<int>(n), scale_x)};
  });
}

hr_status hr_rht(const hr_tensor* in, uint32_t w1, double scale_x, hr_tensor** out) {
  if (hr_status s = require(in && out, "hr_rht: NULL argument")) return s;
  return guarded([&] {
    *out = new hr_tensor{rht_featuremap(in->fm, static_cast<int>(w1), scale_x)};
  });
}

hr_status hr_radon_width(uint32_t w1, double scale_x, int* out) {
  if (hr_status s = require(out != nullptr, "hr_radon_width: out is NULL")) return s;
  return guarded([&] { *out = radon_width(static_cast<int>(w1), scale_x); });
}

hr_status hr_adjoint_check_fht(uint32_t h, uint64_t seed, double* rel_err) {
  if (hr_status s = require(rel_err != nullptr, "hr_adjoint_check_fht: out is NULL")) return s;
  return guarded([&] {
    Rng rng(seed);
    Image x(static_cast<int>(h), static_cast<int>(h));
    for (double& v : x.values) v = rng.uniform(-1.0, 1.0);
    HoughImage y;
    y.h = static_cast<int>(h);
    y.grid = Image(hough_rows(y.h), hough_cols(y.h));
    for (double& v : y.grid.values) v = rng.uniform(-1.0, 1.0);
    const double lhs = dot(fht_full(x).grid.values, y.grid.values);
    const double rhs = dot(x.values, tfht(y).values);
    *rel_err = std::abs(lhs - rhs) / (std::abs(lhs) + 1e-30);
  });
}

hr_status hr_adjoint_check_hrt(uint32_t w1, uint32_t n, double scale_x, uint64_t seed,
                               double* rel_err) {
  if (hr_status s = require(rel_err != nullptr, "hr_adjoint_check_hrt: out is NULL")) return s;
  return guarded([&] {
    const RadonHoughMap map = build_map(static_cast<int>(w1), static_cast<int>(n), scale_x);
    Rng rng(seed);
    HoughImage x;
    x.h = static_cast<int>(w1);
    x.grid = Image(hough_rows(x.h), hough_cols(x.h));
    for (double& v : x.grid.values) v = rng.uniform(-1.0, 1.0);
    RadonImage y;
    y.n = map.n;
    y.width = map.width;
    y.w1 = map.w1;
    y.scale_x = map.scale_x;
    y.grid = Image(map.n, map.width);
    for (double& v : y.grid.values) v = rng.uniform(-1.0, 1.0);
    const double lhs = dot(hrt(x, map).grid.values, y.grid.values);
    const double rhs = dot(x.grid.values, rht(y, map).grid.values);
    *rel_err = std::abs(lhs - rhs) / (std::abs(lhs) + 1e-30);
  });
}

hr_status hr_miou(const hr_tensor* prediction, const hr_tensor* truth, double* out) {
  if (hr_status s = require(prediction && truth && out, "hr_miou: NULL argument")) return s;
  return guarded([&] {
    *out = miou(tensor_channel0(prediction, "hr_miou"), tensor_channel0(truth, "hr_miou"));
  });
}

uint64_t hr_inner_ops_count(uint32_t width, uint32_t height) {
  return inner_ops_count(static_cast<int>(width), static_cast<int>(height));
}

hr_status hr_format_ops(uint64_t ops, char* buf, size_t buf_len) {
  if (hr_status s = require(buf && buf_len > 0, "hr_format_ops: bad buffer")) return s;
  return guarded([&] {
    const std::string text = format_ops(ops);
    if (text.size() + 1 > buf_len) throw ArgumentError("hr_format_ops: buffer too small");
    std::memcpy(buf, text.c_str(), text.size() + 1);
  });
}

hr_status hr_dataset_synth(uint32_t count, uint32_t size, uint64_t seed, uint32_t distortions,
                           hr_dataset** out) {
  if (hr_status s = require(out != nullptr, "hr_dataset_synth: out is NULL")) return s;
  return guarded([&] {
    *out = new hr_dataset{
        synth_dataset(static_cast<int>(count), static_cast<int>(size), seed, distortions)};
  });
}

hr_status hr_dataset_midv(const char* root, hr_dataset** out) {
  if (hr_status s = require(root && out, "hr_dataset_midv: NULL argument")) return s;
  return guarded([&] { *out = new hr_dataset{ingest_midv(root)}; });
}

void hr_dataset_destroy(hr_dataset* ds) { delete ds; }

uint32_t hr_dataset_count(const hr_dataset* ds) {
  return static_cast<uint32_t>(ds->samples.size());
}

uint32_t hr_dataset_split_count(const hr_dataset* ds, int split) {
  uint32_t count = 0;
  const Split want = split == HR_SPLIT_TRAIN ? Split::Train : Split::Test;
  for (const Sample& s : ds->samples)
    if (s.split == want) ++count;
  return count;
}

hr_status hr_dataset_sample(const hr_dataset* ds, uint32_t index, hr_tensor** image,
                            hr_tensor** mask, int* split) {
  if (hr_status s = require(ds != nullptr, "hr_dataset_sample: ds is NULL")) return s;
  return guarded([&] {
    if (index >= ds->samples.size()) throw ArgumentError("hr_dataset_sample: index out of range");
    const Sample& s = ds->samples[index];
    if (image) {
      FeatureMap fm(1, s.image.height, s.image.width);
      fm.set_channel(0, s.image);
      *image = new hr_tensor{std::move(fm)};
    }
    if (mask) {
      FeatureMap fm(1, s.mask.height, s.mask.width);
      fm.set_channel(0, s.mask);
      *mask = new hr_tensor{std::move(fm)};
    }
    if (split) *split = s.split == Split::Train ? HR_SPLIT_TRAIN : HR_SPLIT_TEST;
  });
}

hr_status hr_dataset_export(const hr_dataset* ds, const char* dir) {
  if (hr_status s = require(ds && dir, "hr_dataset_export: NULL argument")) return s;
  return guarded([&] { export_dataset(ds->samples, dir); });
}

hr_status hr_network_create(uint32_t input_size, uint32_t n, double scale_x, uint32_t width_div,
                            uint64_t seed, hr_network** out) {
  if (hr_status s = require(out != nullptr, "hr_network_create: out is NULL")) return s;
  return guarded([&] {
    NetworkSpec spec;
    spec.input_size = static_cast<int>(input_size);
    spec.n = static_cast<int>(n);
    spec.scale_x = scale_x;
    spec.width_div = static_cast<int>(width_div);
    *out = new hr_network{Network(spec, seed)};
  });
}

void hr_network_destroy(hr_network* net) { delete net; }

uint64_t hr_network_param_count(const hr_network* net) { return net->net.param_count(); }

hr_status hr_network_inner_shape(const hr_network* net, int* width, int* height) {
  if (hr_status s = require(net != nullptr, "hr_network_inner_shape: net is NULL")) return s;
  return guarded([&] {
    const auto [n, w] = net->net.inner_shape();
    if (width) *width = w;
    if (height) *height = n;
  });
}

hr_status hr_network_forward(hr_network* net, const hr_tensor* image, hr_tensor** probs) {
  if (hr_status s = require(net && image && probs, "hr_network_forward: NULL argument")) return s;
  return guarded([&] {
    *probs = new hr_tensor{net->net.forward(tensor_channel0(image, "hr_network_forward"))};
  });
}

hr_status hr_network_train(hr_network* net, const hr_dataset* ds, uint32_t epochs, double lr,
                           uint32_t batch_size, uint64_t seed, const char* log_path) {
  if (hr_status s = require(net && ds, "hr_network_train: NULL argument")) return s;
  return guarded([&] {
    const std::vector<EpochLog> log = train(net->net, ds->samples, static_cast<int>(epochs), lr,
                                            seed, static_cast<int>(batch_size));
    if (log_path) write_training_log(log, log_path);
  });
}

hr_status hr_network_eval(hr_network* net, const hr_dataset* ds, int split, double* miou_out) {
  if (hr_status s = require(net && ds && miou_out, "hr_network_eval: NULL argument")) return s;
  return guarded([&] {
    *miou_out = evaluate(net->net, ds->samples,
                         split == HR_SPLIT_TRAIN ? Split::Train : Split::Test);
  });
}

hr_status hr_network_save(const hr_network* net, const char* dir) {
  if (hr_status s = require(net && dir, "hr_network_save: NULL argument")) return s;
  return guarded([&] { net->net.save_checkpoint(dir); });
}

hr_status hr_network_load(const char* dir, hr_network** out) {
  if (hr_status s = require(dir && out, "hr_network_load: NULL argument")) return s;
  return guarded([&] { *out = new hr_network{Network::load_checkpoint(dir)}; });
}

hr_status hr_gradcheck(uint32_t input_size, int corrupt_adjoint, hr_gradcheck_cb cb, void* user,
                       int* all_passed) {
  return guarded([&] {
    const std::vector<GradCheckResult> results =
        run_gradcheck(static_cast<int>(input_size), corrupt_adjoint != 0);
    bool ok = true;
    for (const GradCheckResult& r : results) {
      ok = ok && r.passed;
      if (cb) cb(r.block.c_str(), r.rel_err, r.threshold, r.passed ? 1 : 0, user);
    }
    if (all_passed) *all_passed = ok ? 1 : 0;
  });
}

}  // extern "C"
