#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "grid.hpp"

namespace houghradon {

/// Four ordered corner points (x, y) in source-image pixel coordinates.
/// Corners may lie outside the image frame.
struct QuadAnnotation {
  std::array<std::array<double, 2>, 4> pts{};
};

struct RasterResult {
  Image mask;
  bool degenerate = false;  // zero-area quad, mask is all zero
};

/// Binary mask: pixel = 1 iff its center lies inside the convex quad,
/// clipped to the frame. Scanline fill, deterministic.
RasterResult rasterize_quad(const QuadAnnotation& quad, int out_size);

/// Number of corners with 0 <= x < w and 0 <= y < h (half-open bounds).
int corners_inside_count(const QuadAnnotation& quad, int frame_w, int frame_h);

enum class Split { Train, Test };

struct Sample {
  Image image;  // grayscale in [0, 1]
  Image mask;   // binary, 1 = document
  std::string source_id;
  Split split = Split::Train;
};

struct IngestStats {
  int skipped = 0;  // unreadable images or missing/malformed annotations
};

/// Walks a MIDV-500-style tree: one folder per document type, each holding
/// images (binary PGM) with a JSON annotation per image carrying a "quad"
/// array of four [x, y] pairs. Annotations are looked up next to the image
/// (same basename, .json) or in a parallel ground_truth/ tree. Samples are
/// resized to 256x256, filtered to >= 3 corners inside the frame, and split
/// by document-type index: the first 30 types train, the rest test.
std::vector<Sample> ingest_midv(const std::string& root, IngestStats* stats = nullptr);

/// Distortion set applied by synth_dataset.
namespace distortion {
constexpr unsigned kNoise = 1u << 0;      // additive gaussian, sigma <= 0.1
constexpr unsigned kHighlight = 1u << 1;  // bright elliptical patch
constexpr unsigned kLines = 1u << 2;      // 1-3 straight lines
constexpr unsigned kBlur = 1u << 3;       // 3x3 box blur
constexpr unsigned kDarken = 1u << 4;     // global x0.5..0.9
constexpr unsigned kAll = 0x1f;
}  // namespace distortion

/// Synthetic document-like samples: a random convex quad (10-80% of the
/// frame) at a distinct intensity from the background, distorted by a random
/// subset of the enabled distortions. The mask is the clean rasterization.
/// Deterministic per seed; the first 80% of samples are tagged train.
std::vector<Sample> synth_dataset(int count, int size, uint64_t seed, unsigned distortions);

/// Writes samples as paired PGM files plus an index.csv
/// (columns: index,image,mask,split).
void export_dataset(const std::vector<Sample>& samples, const std::string& dir);

}  // namespace houghradon
