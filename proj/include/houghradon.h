/* houghradon: Fast Hough Transform, Hough<->Radon resampling layers and a
 * compact segmentation autoencoder built on them.
 *
 * C API of the shared library. All objects are opaque handles created and
 * destroyed through these functions; every fallible call returns hr_status
 * and leaves a human-readable message in hr_last_error() (thread-local).
 * Handles are not thread-safe to mutate concurrently; distinct handles may
 * be used from distinct threads freely.
 */

#ifndef HOUGHRADON_H
#define HOUGHRADON_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HOUGHRADON_API __declspec(dllexport)
#else
#define HOUGHRADON_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hr_status {
  HR_OK = 0,
  HR_ERROR_ARGUMENT = 1, /* invalid argument or shape */
  HR_ERROR_FORMAT = 2,   /* malformed file contents */
  HR_ERROR_IO = 3,       /* filesystem failure */
  HR_ERROR_INTERNAL = 4
} hr_status;

HOUGHRADON_API const char* hr_version(void);
/* Message from the most recent failing call on this thread. */
HOUGHRADON_API const char* hr_last_error(void);

/* ---- tensors: channels x height x width, doubles, (c, y, x) order ---- */

typedef struct hr_tensor hr_tensor;

HOUGHRADON_API hr_status hr_tensor_create(uint32_t channels, uint32_t height, uint32_t width,
                                          hr_tensor** out);
HOUGHRADON_API void hr_tensor_destroy(hr_tensor* t);
HOUGHRADON_API uint32_t hr_tensor_channels(const hr_tensor* t);
HOUGHRADON_API uint32_t hr_tensor_height(const hr_tensor* t);
HOUGHRADON_API uint32_t hr_tensor_width(const hr_tensor* t);
HOUGHRADON_API double* hr_tensor_data(hr_tensor* t);
HOUGHRADON_API const double* hr_tensor_cdata(const hr_tensor* t);

/* Binary 8-bit PGM ("P5", maxval 255); bytes map to values in [0, 1]. */
HOUGHRADON_API hr_status hr_tensor_read_pgm(const char* path, hr_tensor** out);
HOUGHRADON_API hr_status hr_tensor_write_pgm(const hr_tensor* t, const char* path);
/* "HRT1" raw tensor container (float32 payload). */
HOUGHRADON_API hr_status hr_tensor_read(const char* path, hr_tensor** out);
HOUGHRADON_API hr_status hr_tensor_write(const hr_tensor* t, const char* path);

/* ---- transforms (applied per channel) ---- */

/* Square power-of-two h x h channels -> stitched (4h-3) x 2h Hough maps.
 * With naive != 0 the O(h^3) definition is evaluated instead of the fast
 * butterfly; both produce identical results. */
HOUGHRADON_API hr_status hr_fht(const hr_tensor* in, int naive, hr_tensor** out);
/* Adjoint of hr_fht: (4h-3) x 2h -> h x h. */
HOUGHRADON_API hr_status hr_tfht(const hr_tensor* in, hr_tensor** out);

/* Hough (4h-3) x 2h -> Radon n x round(scaleX * floor(h * sqrt 2)). */
HOUGHRADON_API hr_status hr_hrt(const hr_tensor* in, uint32_t n, double scale_x, hr_tensor** out);
/* Adjoint of hr_hrt: Radon n x width -> Hough (4*w1-3) x 2*w1. */
HOUGHRADON_API hr_status hr_rht(const hr_tensor* in, uint32_t w1, double scale_x, hr_tensor** out);

HOUGHRADON_API hr_status hr_radon_width(uint32_t w1, double scale_x, int* out);

/* Relative adjoint-identity defect |<Fx,y> - <x,F'y>| / (|<Fx,y>| + eps)
 * on a deterministic random pair. */
HOUGHRADON_API hr_status hr_adjoint_check_fht(uint32_t h, uint64_t seed, double* rel_err);
HOUGHRADON_API hr_status hr_adjoint_check_hrt(uint32_t w1, uint32_t n, double scale_x,
                                              uint64_t seed, double* rel_err);

/* ---- metrics & op counting ---- */

/* Mean IoU over the two classes of binary label maps (nonzero = class 1). */
HOUGHRADON_API hr_status hr_miou(const hr_tensor* prediction, const hr_tensor* truth, double* out);

/* Multiply count of one 16->16 3x3 convolution over a width x height map. */
HOUGHRADON_API uint64_t hr_inner_ops_count(uint32_t width, uint32_t height);
/* Formats ops in units of 1e7: one decimal below 10, integer at/above 10. */
HOUGHRADON_API hr_status hr_format_ops(uint64_t ops, char* buf, size_t buf_len);

/* ---- datasets ---- */

typedef struct hr_dataset hr_dataset;

enum {
  HR_DISTORT_NOISE = 1 << 0,
  HR_DISTORT_HIGHLIGHT = 1 << 1,
  HR_DISTORT_LINES = 1 << 2,
  HR_DISTORT_BLUR = 1 << 3,
  HR_DISTORT_DARKEN = 1 << 4,
  HR_DISTORT_ALL = 0x1f
};

enum { HR_SPLIT_TRAIN = 0, HR_SPLIT_TEST = 1 };

/* Synthetic quad-document samples; the first 80% are tagged train. */
HOUGHRADON_API hr_status hr_dataset_synth(uint32_t count, uint32_t size, uint64_t seed,
                                          uint32_t distortions, hr_dataset** out);
/* MIDV-500-style tree: per-type folders of PGM images with "quad" JSON
 * annotations; resized to 256x256, >= 3-corners filter, types 1-30 train. */
HOUGHRADON_API hr_status hr_dataset_midv(const char* root, hr_dataset** out);
HOUGHRADON_API void hr_dataset_destroy(hr_dataset* ds);
HOUGHRADON_API uint32_t hr_dataset_count(const hr_dataset* ds);
HOUGHRADON_API uint32_t hr_dataset_split_count(const hr_dataset* ds, int split);
/* Copies one sample out; any of image/mask/split may be NULL. */
HOUGHRADON_API hr_status hr_dataset_sample(const hr_dataset* ds, uint32_t index, hr_tensor** image,
                                           hr_tensor** mask, int* split);
/* Writes paired image/mask PGMs plus index.csv into dir. */
HOUGHRADON_API hr_status hr_dataset_export(const hr_dataset* ds, const char* dir);

/* ---- network ---- */

typedef struct hr_network hr_network;

/* width_div 1 builds the full-width architecture, 4 the reduced variant. */
HOUGHRADON_API hr_status hr_network_create(uint32_t input_size, uint32_t n, double scale_x,
                                           uint32_t width_div, uint64_t seed, hr_network** out);
HOUGHRADON_API void hr_network_destroy(hr_network* net);
HOUGHRADON_API uint64_t hr_network_param_count(const hr_network* net);
/* Radon-space spatial shape of the inner feature maps: {width, height}. */
HOUGHRADON_API hr_status hr_network_inner_shape(const hr_network* net, int* width, int* height);

/* 1 x S x S input -> 2 x S x S softmax probabilities. */
HOUGHRADON_API hr_status hr_network_forward(hr_network* net, const hr_tensor* image,
                                            hr_tensor** probs);
/* Runs the epoch loop on the dataset's train split with one Adam update per
 * mini-batch of averaged gradients; writes the CSV log (header
 * epoch,loss,miou) to log_path when non-NULL. */
HOUGHRADON_API hr_status hr_network_train(hr_network* net, const hr_dataset* ds, uint32_t epochs,
                                          double lr, uint32_t batch_size, uint64_t seed,
                                          const char* log_path);
/* Mean per-image MIoU over one split. */
HOUGHRADON_API hr_status hr_network_eval(hr_network* net, const hr_dataset* ds, int split,
                                         double* miou);
HOUGHRADON_API hr_status hr_network_save(const hr_network* net, const char* dir);
HOUGHRADON_API hr_status hr_network_load(const char* dir, hr_network** out);

/* ---- gradient checking ---- */

typedef void (*hr_gradcheck_cb)(const char* block, double rel_err, double threshold, int passed,
                                void* user);

/* Finite-difference checks per layer block plus a reduced end-to-end
 * network of the given input size. corrupt_adjoint != 0 deliberately breaks
 * the transform adjoints (negative control). */
HOUGHRADON_API hr_status hr_gradcheck(uint32_t input_size, int corrupt_adjoint, hr_gradcheck_cb cb,
                                      void* user, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* HOUGHRADON_H */
