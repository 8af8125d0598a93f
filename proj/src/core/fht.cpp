#include "fht.hpp"

#include <string>

#include "errors.hpp"

namespace houghradon {

namespace {

void require_square_pow2(const Image& img, const char* op) {
  if (img.height != img.width)
    throw ArgumentError(std::string(op) + ": image must be square, got " +
                        std::to_string(img.height) + "x" + std::to_string(img.width));
  if (!is_power_of_two(img.height))
    throw ArgumentError(std::string(op) + ": side must be a power of two, got " +
                        std::to_string(img.height));
}

// Builds the width-2h extended image for the quadrant kernel: the re-oriented
// image occupies columns [0, h), the rest is zero fill. Row-major h x 2h.
Image extend(const Image& oriented) {
  const int h = oriented.height;
  Image ext(h, 2 * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < h; ++x) ext.at(y, x) = oriented.at(y, x);
  return ext;
}

// Butterfly over the cyclic width-W strip. buf holds, per block of m rows,
// the m-row transform of those rows; merging doubles the block size.
Image fht_core(Image ext) {
  const int h = ext.height;
  const int W = ext.width;
  Image next(h, W);
  for (int m = 1; m < h; m *= 2) {
    const int blocks = h / (2 * m);
    for (int b = 0; b < blocks; ++b) {
      const int top = 2 * b * m;
      const int bot = top + m;
      const int dst = 2 * b * m;
      for (int t = 0; t < 2 * m; ++t) {
        const int t2 = t >> 1;
        const int off = t2 + (t & 1);
        const double* top_row = &ext.values[static_cast<size_t>(top + t2) * W];
        const double* bot_row = &ext.values[static_cast<size_t>(bot + t2) * W];
        double* out_row = &next.values[static_cast<size_t>(dst + t) * W];
        for (int s = 0; s < W; ++s) {
          int sb = s + off;
          if (sb >= W) sb -= W;
          out_row[s] = top_row[s] + bot_row[sb];
        }
      }
    }
    std::swap(ext, next);
  }
  return ext;
}

// Reverse of fht_core for the adjoint: splits merged blocks back down,
// scattering each output row into its two source half-rows.
Image tfht_core(Image grad) {
  const int h = grad.height;
  const int W = grad.width;
  Image next(h, W);
  for (int m = h / 2; m >= 1; m /= 2) {
    std::fill(next.values.begin(), next.values.end(), 0.0);
    const int blocks = h / (2 * m);
    for (int b = 0; b < blocks; ++b) {
      const int top = 2 * b * m;
      const int bot = top + m;
      for (int t = 0; t < 2 * m; ++t) {
        const int t2 = t >> 1;
        const int off = t2 + (t & 1);
        const double* g_row = &grad.values[static_cast<size_t>(top + t) * W];
        double* top_row = &next.values[static_cast<size_t>(top + t2) * W];
        double* bot_row = &next.values[static_cast<size_t>(bot + t2) * W];
        for (int s = 0; s < W; ++s) {
          int sb = s + off;
          if (sb >= W) sb -= W;
          top_row[s] += g_row[s];
          bot_row[sb] += g_row[s];
        }
      }
    }
    std::swap(grad, next);
  }
  return grad;
}

}  // namespace

namespace {

// Halving recursion: the length-len pattern for a slope is two length-len/2
// patterns for slope/2, the second half offset by slope/2 + (slope mod 2).
void fill_pattern(std::vector<int>& out, int lo, int len, int slope, int base) {
  if (len == 1) {
    out[static_cast<size_t>(lo)] = base;
    return;
  }
  const int half = len / 2;
  const int s2 = slope / 2;
  fill_pattern(out, lo, half, s2, base);
  fill_pattern(out, lo + half, half, s2, base + s2 + (slope & 1));
}

}  // namespace

std::vector<int> dyadic_pattern(int h, int t) {
  if (!is_power_of_two(h))
    throw ArgumentError("dyadic_pattern: h must be a power of two, got " + std::to_string(h));
  if (t < 0 || t >= h)
    throw ArgumentError("dyadic_pattern: slope t out of range [0, h), got " + std::to_string(t));
  std::vector<int> d(static_cast<size_t>(h), 0);
  fill_pattern(d, 0, h, t, 0);
  return d;
}

namespace detail {

Image reorient(const Image& img, Quadrant q) {
  const int h = img.height;
  Image out(h, h);
  switch (q) {
    case Quadrant::VertRight:
      out = img;
      break;
    case Quadrant::VertLeft:
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < h; ++x) out.at(y, x) = img.at(h - 1 - y, x);
      break;
    case Quadrant::HorzDown:
      // rotation: oriented (col x', row y') = img (col h-1-y', row x')
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < h; ++x) out.at(y, x) = img.at(x, h - 1 - y);
      break;
    case Quadrant::HorzUp:
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < h; ++x) out.at(y, x) = img.at(x, y);
      break;
  }
  return out;
}

Image unreorient(const Image& oriented, Quadrant q, int h) {
  Image out(h, h);
  switch (q) {
    case Quadrant::VertRight:
      out = oriented;
      break;
    case Quadrant::VertLeft:
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < h; ++x) out.at(h - 1 - y, x) = oriented.at(y, x);
      break;
    case Quadrant::HorzDown:
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < h; ++x) out.at(x, h - 1 - y) = oriented.at(y, x);
      break;
    case Quadrant::HorzUp:
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < h; ++x) out.at(x, y) = oriented.at(y, x);
      break;
  }
  return out;
}

int stitched_row(Quadrant q, int h, int t) {
  // Bands run in ascending phi; VertRight and HorzDown descend in kernel
  // slope within their band, the other two ascend.
  switch (q) {
    case Quadrant::VertRight:
      return (h - 1) - t;
    case Quadrant::VertLeft:
      return (h - 1) + t;
    case Quadrant::HorzDown:
      return 3 * (h - 1) - t;
    case Quadrant::HorzUp:
      return 3 * (h - 1) + t;
  }
  return -1;
}

}  // namespace detail

Image fht_quadrant(const Image& img, Quadrant q) {
  require_square_pow2(img, "fht_quadrant");
  return fht_core(extend(detail::reorient(img, q)));
}

Image naive_fht_quadrant(const Image& img, Quadrant q) {
  require_square_pow2(img, "naive_fht_quadrant");
  const Image oriented = detail::reorient(img, q);
  const int h = img.height;
  const int W = 2 * h;
  Image out(h, W);
  for (int t = 0; t < h; ++t) {
    const std::vector<int> d = dyadic_pattern(h, t);
    for (int s = 0; s < W; ++s) {
      double acc = 0.0;
      for (int y = 0; y < h; ++y) {
        int x = s + d[static_cast<size_t>(y)];
        if (x >= W) x -= W;
        if (x < h) acc += oriented.at(y, x);
      }
      out.at(t, s) = acc;
    }
  }
  return out;
}

namespace {

template <typename QuadrantFn>
HoughImage stitch_full(const Image& img, QuadrantFn&& quadrant_fn) {
  const int h = img.height;
  HoughImage hough;
  hough.h = h;
  hough.grid = Image(hough_rows(h), hough_cols(h));
  for (int qi = 0; qi < 4; ++qi) {
    const Quadrant q = static_cast<Quadrant>(qi);
    const Image quad = quadrant_fn(img, q);
    for (int t = 0; t < h; ++t) {
      const int row = detail::stitched_row(q, h, t);
      for (int s = 0; s < 2 * h; ++s) hough.grid.at(row, s) = quad.at(t, s);
    }
  }
  return hough;
}

}  // namespace

HoughImage fht_full(const Image& img) {
  require_square_pow2(img, "fht_full");
  return stitch_full(img, [](const Image& i, Quadrant q) { return fht_quadrant(i, q); });
}

HoughImage naive_fht_full(const Image& img) {
  require_square_pow2(img, "naive_fht_full");
  return stitch_full(img, [](const Image& i, Quadrant q) { return naive_fht_quadrant(i, q); });
}

Image tfht(const HoughImage& hough) {
  const int h = hough.h;
  if (!is_power_of_two(h) || hough.grid.height != hough_rows(h) ||
      hough.grid.width != hough_cols(h))
    throw ArgumentError("tfht: grid shape does not match declared h=" + std::to_string(h));

  Image result(h, h);
  for (int qi = 0; qi < 4; ++qi) {
    const Quadrant q = static_cast<Quadrant>(qi);
    // Each stitched row contributes exactly once. A boundary row shared with
    // the previous band in phi order is owned by that band: VertLeft and
    // HorzUp skip their t = 0 row, HorzDown skips t = h-1.
    const int t_lo = (qi == 1 || qi == 3) ? 1 : 0;
    const int t_hi = (qi == 2) ? h - 2 : h - 1;
    Image grad(h, 2 * h);
    for (int t = t_lo; t <= t_hi; ++t) {
      const int row = detail::stitched_row(q, h, t);
      for (int s = 0; s < 2 * h; ++s) grad.at(t, s) = hough.grid.at(row, s);
    }
    Image ext_grad = tfht_core(std::move(grad));
    Image oriented_grad(h, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < h; ++x) oriented_grad.at(y, x) = ext_grad.at(y, x);
    const Image img_grad = detail::unreorient(oriented_grad, q, h);
    for (size_t i = 0; i < result.size(); ++i) result.values[i] += img_grad.values[i];
  }
  return result;
}

FeatureMap fht_featuremap(const FeatureMap& fm) {
  if (fm.height != fm.width || !is_power_of_two(fm.height))
    throw ArgumentError("fht_featuremap: channels must be square power-of-two images");
  const int h = fm.height;
  FeatureMap out(fm.channels, hough_rows(h), hough_cols(h));
  for (int c = 0; c < fm.channels; ++c) out.set_channel(c, fht_full(fm.channel(c)).grid);
  return out;
}

FeatureMap tfht_featuremap(const FeatureMap& fm) {
  const int h = (fm.height + 3) / 4;
  if (fm.height != hough_rows(h) || fm.width != hough_cols(h) || !is_power_of_two(h))
    throw ArgumentError("tfht_featuremap: channel shape is not a stitched Hough map");
  FeatureMap out(fm.channels, h, h);
  for (int c = 0; c < fm.channels; ++c) {
    HoughImage hough;
    hough.h = h;
    hough.grid = fm.channel(c);
    out.set_channel(c, tfht(hough));
  }
  return out;
}

}  // namespace houghradon
