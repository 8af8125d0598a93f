#pragma once

#include <vector>

#include "grid.hpp"

namespace houghradon {

/// One of the four 45-degree angular ranges covering [-45, 135) degrees,
/// ordered by ascending normal angle phi.
enum class Quadrant : int {
  VertRight = 0,  // [-45, 0): mostly vertical, slope to the right
  VertLeft = 1,   // [0, 45): mostly vertical, slope to the left
  HorzDown = 2,   // [45, 90): mostly horizontal, slope downwards
  HorzUp = 3,     // [90, 135): mostly horizontal, slope upwards
};

/// Stitched four-quadrant Hough map: (4h-3) rows by 2h columns.
/// Quadrant q occupies the row band [q*(h-1), q*(h-1)+h-1]; adjacent bands
/// share exactly one boundary row (the 0, 45 and 90 degree line families).
struct HoughImage {
  int h = 0;   // input side length (power of two)
  Image grid;  // (4h-3) x (2h)
};

inline int hough_rows(int h) { return 4 * h - 3; }
inline int hough_cols(int h) { return 2 * h; }

/// Per-row displacements D(t, y) of the dyadic pattern for slope t over a
/// power-of-two height h: D(t,0) = 0, D(t,h-1) = t, steps of 0 or 1.
std::vector<int> dyadic_pattern(int h, int t);

/// Fast transform of one quadrant: rows indexed by slope t in [0, h), columns
/// by intercept s in [0, 2h) over the cyclically extended width-2h image.
/// output[t][s] = sum_y img_q((s + D(t,y)) mod 2h, y) with img_q the
/// quadrant re-orientation of img. O(h^2 log h) additions, exact for
/// integer inputs.
Image fht_quadrant(const Image& img, Quadrant q);

/// Same contract as fht_quadrant, evaluated directly from the pattern
/// definition in O(h^3). Serves as the correctness oracle.
Image naive_fht_quadrant(const Image& img, Quadrant q);

/// All four quadrants stitched in ascending-phi order into (4h-3) x (2h).
HoughImage fht_full(const Image& img);

/// fht_full assembled from the O(h^3) oracle quadrants.
HoughImage naive_fht_full(const Image& img);

/// Exact adjoint of fht_full as a linear operator:
/// <fht_full(x), y> == <x, tfht(y)> for all x, y.
Image tfht(const HoughImage& hough);

/// Per-channel application over feature maps.
FeatureMap fht_featuremap(const FeatureMap& fm);
FeatureMap tfht_featuremap(const FeatureMap& fm);

namespace detail {
/// Quadrant re-orientation of a square image (a permutation of pixels):
/// VertRight = identity, VertLeft = vertical flip, HorzDown = rotation,
/// HorzUp = transpose. Chosen so that every quadrant reuses the same
/// ascending-displacement kernel and the stitched boundary rows agree.
Image reorient(const Image& img, Quadrant q);
/// Inverse permutation of reorient (scatter direction for the adjoint).
Image unreorient(const Image& img, Quadrant q, int h);
/// Row index of kernel slope t inside the stitched grid for quadrant q.
int stitched_row(Quadrant q, int h, int t);
}  // namespace detail

}  // namespace houghradon
