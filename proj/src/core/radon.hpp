#pragma once

#include <cstdint>
#include <vector>

#include "fht.hpp"
#include "grid.hpp"

namespace houghradon {

/// Uniform angle grid phi_j = -45 + j * (180/n) degrees, j in [0, n),
/// stored in radians.
struct AngleGrid {
  int n = 0;
  std::vector<double> radians;

  static AngleGrid make(int n);
  double degrees(int j) const;
};

/// Output width of the Radon map: round(scale_x * w2) with
/// w2 = floor(w1 * sqrt(2)), rounding half away from zero.
int radon_width(int w1, double scale_x);

/// Uniform (rho, phi) map: n rows (angles) by `width` columns, where column i
/// holds radius rho = i / scale_x. w1 is the side of the image the source
/// Hough map was computed from.
struct RadonImage {
  int n = 0;
  int width = 0;
  int w1 = 0;
  double scale_x = 1.0;
  Image grid;  // n x width
};

/// Continuous line parameters in the source-image frame: intercept s and
/// displacement t (signed), plus the quadrant the angle falls into.
struct LineParams {
  double s = 0.0;
  double t = 0.0;
  Quadrant q = Quadrant::VertRight;
};

/// Maps (rho, phi) to (s, t, quadrant). rho is the physical radius (already
/// divided by scale_x); phi is in radians, within [-45, 135) degrees.
/// For mostly vertical angles t = -w1*tan(-phi), for mostly horizontal
/// t = -w1/tan(phi); s = rho * sqrt(t^2 + w1^2) / w1 in both regimes.
LineParams map_radon_to_hough(double rho, double phi, int w1);

/// Precomputed gather table shared by hrt and rht: for every output cell
/// (i, j), either the source Hough cell or out-of-range.
struct RadonHoughMap {
  int w1 = 0;
  int n = 0;
  int width = 0;
  double scale_x = 1.0;

  struct Cell {
    int32_t row = -1;  // -1 marks out-of-range
    int32_t col = -1;
  };
  std::vector<Cell> cells;  // n * width, row-major by angle j

  const Cell& cell(int j, int i) const { return cells[static_cast<size_t>(j) * width + i]; }
};

RadonHoughMap build_map(int w1, int n, double scale_x);

/// Gather: output[j][i] = hough[map[i,j]], 0 for out-of-range cells.
RadonImage hrt(const HoughImage& hough, const RadonHoughMap& map);
RadonImage hrt(const HoughImage& hough, int n, double scale_x);

/// Exact adjoint of hrt: scatter-add of each radon cell into its mapped
/// Hough cell; out-of-range cells contribute nothing.
HoughImage rht(const RadonImage& radon, const RadonHoughMap& map);
HoughImage rht(const RadonImage& radon, int w1);

/// Per-channel application over feature maps.
FeatureMap hrt_featuremap(const FeatureMap& fm, int n, double scale_x);
FeatureMap rht_featuremap(const FeatureMap& fm, int w1, double scale_x);
FeatureMap hrt_featuremap(const FeatureMap& fm, const RadonHoughMap& map);
FeatureMap rht_featuremap(const FeatureMap& fm, const RadonHoughMap& map);

}  // namespace houghradon
