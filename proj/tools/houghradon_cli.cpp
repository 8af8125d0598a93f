// Command-line frontend over the houghradon C API.
//
// Exit codes: 0 success, 2 usage or input errors, 1 internal failures.
// Diagnostics go to stderr; data goes to files or stdout.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <houghradon.h>

namespace {

int exit_code_for(hr_status status) {
  switch (status) {
    case HR_OK:
      return 0;
    case HR_ERROR_ARGUMENT:
    case HR_ERROR_FORMAT:
    case HR_ERROR_IO:
      return 2;
    default:
      return 1;
  }
}

// Reports a failed call and converts its status to a process exit code.
int report(hr_status status) {
  if (status != HR_OK) std::fprintf(stderr, "error: %s\n", hr_last_error());
  return exit_code_for(status);
}

bool has_suffix(const std::string& s, const char* suffix) {
  const size_t n = std::strlen(suffix);
  return s.size() >= n && s.compare(s.size() - n, n, suffix) == 0;
}

hr_status read_input(const std::string& path, hr_tensor** out) {
  return has_suffix(path, ".pgm") ? hr_tensor_read_pgm(path.c_str(), out)
                                  : hr_tensor_read(path.c_str(), out);
}

struct TensorGuard {
  hr_tensor* t = nullptr;
  ~TensorGuard() { hr_tensor_destroy(t); }
};

struct DatasetGuard {
  hr_dataset* ds = nullptr;
  ~DatasetGuard() { hr_dataset_destroy(ds); }
};

struct NetworkGuard {
  hr_network* net = nullptr;
  ~NetworkGuard() { hr_network_destroy(net); }
};

int cmd_fht(const std::string& in_path, const std::string& out_path, bool naive, bool compare) {
  TensorGuard in;
  if (hr_status st = read_input(in_path, &in.t)) return report(st);

  if (compare) {
    TensorGuard fast, slow;
    if (hr_status st = hr_fht(in.t, 0, &fast.t)) return report(st);
    if (hr_status st = hr_fht(in.t, 1, &slow.t)) return report(st);
    const size_t count = static_cast<size_t>(hr_tensor_channels(fast.t)) *
                         hr_tensor_height(fast.t) * hr_tensor_width(fast.t);
    const double* a = hr_tensor_cdata(fast.t);
    const double* b = hr_tensor_cdata(slow.t);
    double max_rel = 0.0;
    for (size_t i = 0; i < count; ++i) {
      const double rel = std::abs(a[i] - b[i]) / (std::abs(b[i]) + 1e-30);
      max_rel = std::max(max_rel, rel);
    }
    std::printf("fht vs naive: max relative difference %.3e\n", max_rel);
    if (!out_path.empty())
      if (hr_status st = hr_tensor_write(fast.t, out_path.c_str())) return report(st);
    if (max_rel >= 1e-9) {
      std::fprintf(stderr, "error: fast and naive transforms disagree\n");
      return 1;
    }
    return 0;
  }

  TensorGuard out;
  if (hr_status st = hr_fht(in.t, naive ? 1 : 0, &out.t)) return report(st);
  std::printf("[%u; %u]\n", hr_tensor_width(out.t), hr_tensor_height(out.t));
  return report(hr_tensor_write(out.t, out_path.c_str()));
}

int cmd_hrt(const std::string& in_path, const std::string& out_path, uint32_t n, double scale_x,
            bool adjoint_check) {
  TensorGuard in;
  if (hr_status st = read_input(in_path, &in.t)) return report(st);

  if (adjoint_check) {
    const uint32_t rows = hr_tensor_height(in.t);
    const uint32_t w1 = (rows + 3) / 4;
    double rel = 0.0;
    if (hr_status st = hr_adjoint_check_hrt(w1, n, scale_x, 1, &rel)) return report(st);
    std::printf("hrt adjoint identity defect: %.3e\n", rel);
    return rel < 1e-9 ? 0 : 1;
  }

  TensorGuard out;
  if (hr_status st = hr_hrt(in.t, n, scale_x, &out.t)) return report(st);
  std::printf("[%u; %u]\n", hr_tensor_width(out.t), hr_tensor_height(out.t));
  return report(hr_tensor_write(out.t, out_path.c_str()));
}

int cmd_rht(const std::string& in_path, const std::string& out_path, uint32_t w1, double scale_x,
            bool adjoint_check) {
  TensorGuard in;
  if (hr_status st = read_input(in_path, &in.t)) return report(st);

  if (adjoint_check) {
    double rel = 0.0;
    if (hr_status st = hr_adjoint_check_hrt(w1, hr_tensor_height(in.t), scale_x, 1, &rel))
      return report(st);
    std::printf("rht adjoint identity defect: %.3e\n", rel);
    return rel < 1e-9 ? 0 : 1;
  }

  TensorGuard out;
  if (hr_status st = hr_rht(in.t, w1, scale_x, &out.t)) return report(st);
  std::printf("[%u; %u]\n", hr_tensor_width(out.t), hr_tensor_height(out.t));
  return report(hr_tensor_write(out.t, out_path.c_str()));
}

int cmd_opcount(uint32_t w1, const std::vector<uint32_t>& n_list,
                const std::vector<double>& scalex_list) {
  for (const uint32_t n : n_list)
    for (const double sx : scalex_list) {
      int width = 0;
      if (hr_status st = hr_radon_width(w1, sx, &width)) return report(st);
      char ops[32];
      if (hr_status st = hr_format_ops(hr_inner_ops_count(width, n), ops, sizeof ops))
        return report(st);
      std::printf("[%d; %u] %s\n", width, n, ops);
    }
  return 0;
}

int make_dataset(uint32_t synth, const std::string& midv, uint32_t size, uint64_t seed,
                 hr_dataset** out) {
  if (!midv.empty()) return report(hr_dataset_midv(midv.c_str(), out));
  if (synth == 0) {
    std::fprintf(stderr, "error: provide --synth N or --midv ROOT\n");
    return 2;
  }
  return report(hr_dataset_synth(synth, size, seed, HR_DISTORT_ALL, out));
}

int cmd_train(uint32_t synth, const std::string& midv, uint32_t size, uint32_t n, double scale_x,
              uint32_t width_div, uint32_t epochs, double lr, uint32_t batch, uint64_t seed,
              const std::string& out_dir, const std::string& log_path) {
  DatasetGuard ds;
  if (int rc = make_dataset(synth, midv, size, seed, &ds.ds)) return rc;

  NetworkGuard net;
  if (hr_status st = hr_network_create(size, n, scale_x, width_div, seed, &net.net))
    return report(st);
  std::fprintf(stderr, "training on %u samples (%u train / %u test), %" PRIu64 " parameters\n",
               hr_dataset_count(ds.ds), hr_dataset_split_count(ds.ds, HR_SPLIT_TRAIN),
               hr_dataset_split_count(ds.ds, HR_SPLIT_TEST), hr_network_param_count(net.net));
  if (hr_status st = hr_network_train(net.net, ds.ds, epochs, lr, batch, seed,
                                      log_path.empty() ? nullptr : log_path.c_str()))
    return report(st);
  return report(hr_network_save(net.net, out_dir.c_str()));
}

int cmd_eval(const std::string& checkpoint, uint32_t synth, const std::string& midv, uint32_t size,
             uint64_t seed) {
  NetworkGuard net;
  if (hr_status st = hr_network_load(checkpoint.c_str(), &net.net)) return report(st);
  DatasetGuard ds;
  if (int rc = make_dataset(synth, midv, size, seed, &ds.ds)) return rc;
  double miou = 0.0;
  if (hr_status st = hr_network_eval(net.net, ds.ds, HR_SPLIT_TEST, &miou)) return report(st);
  std::printf("%.1f\n", miou * 100.0);
  return 0;
}

void gradcheck_print(const char* block, double rel_err, double threshold, int passed, void*) {
  std::printf("%-14s rel err %.3e (threshold %.0e): %s\n", block, rel_err, threshold,
              passed ? "PASS" : "FAIL");
}

int cmd_gradcheck(uint32_t size, bool corrupt) {
  int all_passed = 0;
  if (hr_status st = hr_gradcheck(size, corrupt ? 1 : 0, gradcheck_print, nullptr, &all_passed))
    return report(st);
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fast Hough Transform, Hough/Radon conversion layers and the "
               "segmentation autoencoder built on them"};
  app.require_subcommand(1);

  // fht
  std::string fht_in, fht_out;
  bool fht_naive = false, fht_compare = false;
  CLI::App* fht = app.add_subcommand("fht", "Stitched four-quadrant Fast Hough Transform");
  fht->add_option("input", fht_in, "input image (.pgm or HRT1 tensor)")->required();
  fht->add_option("output", fht_out, "output HRT1 tensor");
  fht->add_flag("--naive", fht_naive, "evaluate the O(h^3) definition instead of the butterfly");
  fht->add_flag("--compare", fht_compare, "run both paths and verify they agree");

  // hrt
  std::string hrt_in, hrt_out;
  uint32_t hrt_n = 253;
  double hrt_sx = 0.711;
  bool hrt_adjoint = false;
  CLI::App* hrt = app.add_subcommand("hrt", "Hough-to-Radon resampling");
  hrt->add_option("input", hrt_in, "input Hough tensor")->required();
  hrt->add_option("output", hrt_out, "output Radon tensor");
  hrt->add_option("--n", hrt_n, "number of angles (output height)");
  hrt->add_option("--scale-x", hrt_sx, "output width scale");
  hrt->add_flag("--adjoint-check", hrt_adjoint, "verify <HRT x, y> == <x, RHT y> and exit");

  // rht
  std::string rht_in, rht_out;
  uint32_t rht_w1 = 64;
  double rht_sx = 0.711;
  bool rht_adjoint = false;
  CLI::App* rht = app.add_subcommand("rht", "Radon-to-Hough transposed resampling");
  rht->add_option("input", rht_in, "input Radon tensor")->required();
  rht->add_option("output", rht_out, "output Hough tensor");
  rht->add_option("--w1", rht_w1, "side of the source image the Hough map came from");
  rht->add_option("--scale-x", rht_sx, "width scale the Radon map was built with");
  rht->add_flag("--adjoint-check", rht_adjoint, "verify the adjoint identity and exit");

  // opcount
  uint32_t op_w1 = 64;
  std::vector<uint32_t> op_n = {61, 93, 125, 157, 189, 221, 253, 285, 317, 349};
  std::vector<double> op_sx = {0.178, 0.356, 0.533, 0.711, 0.889,
                               1.067, 1.244, 1.422, 1.6,   1.778};
  CLI::App* opcount = app.add_subcommand("opcount", "Inner-convolution cost table (units of 1e7)");
  opcount->add_option("--w1", op_w1, "source image side");
  opcount->add_option("--n-list", op_n, "angle counts (rows)");
  opcount->add_option("--scalex-list", op_sx, "width scales (columns)");

  // train
  uint32_t tr_synth = 0, tr_size = 256, tr_n = 253, tr_div = 1, tr_epochs = 30, tr_batch = 1;
  std::string tr_midv, tr_out = "checkpoint", tr_log;
  double tr_sx = 0.711, tr_lr = 1e-3;
  uint64_t tr_seed = 1;
  CLI::App* train = app.add_subcommand("train", "Train the autoencoder");
  train->add_option("--synth", tr_synth, "generate N synthetic samples (80/20 split)");
  train->add_option("--midv", tr_midv, "MIDV-500-style dataset root");
  train->add_option("--size", tr_size, "input image side (power of two)");
  train->add_option("--n", tr_n, "HRT angle count");
  train->add_option("--scale-x", tr_sx, "HRT width scale");
  train->add_option("--width-div", tr_div, "channel width divisor (4 = reduced variant)");
  train->add_option("--epochs", tr_epochs, "training epochs");
  train->add_option("--lr", tr_lr, "Adam learning rate");
  train->add_option("--batch", tr_batch, "gradient accumulation batch size");
  train->add_option("--seed", tr_seed, "RNG seed (init, shuffling, synthesis)");
  train->add_option("--out", tr_out, "checkpoint directory to write");
  train->add_option("--log", tr_log, "CSV training log path (epoch,loss,miou)");

  // eval
  std::string ev_checkpoint, ev_midv;
  uint32_t ev_synth = 0, ev_size = 256;
  uint64_t ev_seed = 1;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint (prints MIoU percentage)");
  eval->add_option("checkpoint", ev_checkpoint, "checkpoint directory")->required();
  eval->add_option("--synth", ev_synth, "evaluate on N synthetic samples' test split");
  eval->add_option("--midv", ev_midv, "MIDV-500-style dataset root");
  eval->add_option("--size", ev_size, "synthetic sample side");
  eval->add_option("--seed", ev_seed, "synthetic dataset seed");

  // gradcheck
  uint32_t gc_size = 16;
  bool gc_corrupt = false;
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "Finite-difference gradient checks");
  gradcheck->add_option("--size", gc_size, "reduced network input side");
  gradcheck->add_flag("--corrupt-adjoint", gc_corrupt,
                      "break the transform adjoints on purpose (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  if (fht->parsed()) return cmd_fht(fht_in, fht_out, fht_naive, fht_compare);
  if (hrt->parsed()) return cmd_hrt(hrt_in, hrt_out, hrt_n, hrt_sx, hrt_adjoint);
  if (rht->parsed()) return cmd_rht(rht_in, rht_out, rht_w1, rht_sx, rht_adjoint);
  if (opcount->parsed()) return cmd_opcount(op_w1, op_n, op_sx);
  if (train->parsed())
    return cmd_train(tr_synth, tr_midv, tr_size, tr_n, tr_sx, tr_div, tr_epochs, tr_lr, tr_batch,
                     tr_seed, tr_out, tr_log);
  if (eval->parsed()) return cmd_eval(ev_checkpoint, ev_synth, ev_midv, ev_size, ev_seed);
  if (gradcheck->parsed()) return cmd_gradcheck(gc_size, gc_corrupt);
  return 2;
}
