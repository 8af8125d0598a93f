#include "radon.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace houghradon {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_params(int w1, int n, double scale_x) {
  if (w1 < 2 || !is_power_of_two(w1))
    throw ArgumentError("radon: w1 must be a power of two >= 2, got " + std::to_string(w1));
  if (n < 1) throw ArgumentError("radon: n must be positive, got " + std::to_string(n));
  if (!(scale_x > 0.0)) throw ArgumentError("radon: scaleX must be positive");
}

}  // namespace

AngleGrid AngleGrid::make(int n) {
  if (n < 1) throw ArgumentError("AngleGrid: n must be positive");
  AngleGrid grid;
  grid.n = n;
  grid.radians.resize(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    // (180 j - 45 n) / n hits the quadrant boundaries exactly.
    const double deg = (180.0 * j - 45.0 * n) / n;
    grid.radians[static_cast<size_t>(j)] = deg * (kPi / 180.0);
  }
  return grid;
}

double AngleGrid::degrees(int j) const { return radians[static_cast<size_t>(j)] * (180.0 / kPi); }

int radon_width(int w1, double scale_x) {
  if (w1 < 2) throw ArgumentError("radon_width: w1 must be >= 2, got " + std::to_string(w1));
  if (!(scale_x > 0.0)) throw ArgumentError("radon_width: scaleX must be positive");
  const int w2 = static_cast<int>(std::floor(w1 * std::sqrt(2.0)));
  return static_cast<int>(std::llround(scale_x * w2));
}

LineParams map_radon_to_hough(double rho, double phi, int w1) {
  const double deg = phi * (180.0 / kPi);
  if (deg < -45.0 - 1e-9 || deg >= 135.0 + 1e-9)
    throw ArgumentError("map_radon_to_hough: phi out of [-45, 135) degrees");
  LineParams p;
  if (deg < 0.0)
    p.q = Quadrant::VertRight;
  else if (deg < 45.0)
    p.q = Quadrant::VertLeft;
  else if (deg < 90.0)
    p.q = Quadrant::HorzDown;
  else
    p.q = Quadrant::HorzUp;

  if (p.q == Quadrant::VertRight || p.q == Quadrant::VertLeft)
    p.t = -w1 * std::tan(-phi);
  else
    p.t = -w1 / std::tan(phi);
  p.s = rho * std::sqrt(p.t * p.t + static_cast<double>(w1) * w1) / w1;
  return p;
}

RadonHoughMap build_map(int w1, int n, double scale_x) {
  require_params(w1, n, scale_x);
  RadonHoughMap map;
  map.w1 = w1;
  map.n = n;
  map.width = radon_width(w1, scale_x);
  map.scale_x = scale_x;
  map.cells.resize(static_cast<size_t>(n) * map.width);

  const AngleGrid angles = AngleGrid::make(n);
  const int h = w1;
  const int rows = hough_rows(h);
  const int cols = hough_cols(h);

  for (int j = 0; j < n; ++j) {
    const double phi = angles.radians[static_cast<size_t>(j)];
    for (int i = 0; i < map.width; ++i) {
      const double rho = i / scale_x;
      const LineParams p = map_radon_to_hough(rho, phi, w1);

      // Quadrant-local frame: the kernel displacement is |t|, and the
      // intercept is re-anchored at the re-oriented image's first row.
      const double t_local = std::abs(p.t);
      double s_local = p.s;
      const double anchor = static_cast<double>(h - 1) / w1;
      if (p.q == Quadrant::VertLeft)
        s_local = p.s - p.t * anchor;
      else if (p.q == Quadrant::HorzDown)
        s_local = p.s + p.t * anchor;

      RadonHoughMap::Cell cell;
      const long t_round = std::lround(t_local);
      const long s_round = std::lround(s_local);
      if (t_round >= 0 && t_round < h) {
        long col = s_round;
        if (col >= -h && col < 0) col += cols;  // wrapped negative intercepts
        if (col >= 0 && col < cols) {
          const int row = detail::stitched_row(p.q, h, static_cast<int>(t_round));
          if (row >= 0 && row < rows) {
            cell.row = static_cast<int32_t>(row);
            cell.col = static_cast<int32_t>(col);
          }
        }
      }
      map.cells[static_cast<size_t>(j) * map.width + i] = cell;
    }
  }
  return map;
}

RadonImage hrt(const HoughImage& hough, const RadonHoughMap& map) {
  if (hough.h != map.w1)
    throw ArgumentError("hrt: hough side " + std::to_string(hough.h) +
                        " does not match map w1 " + std::to_string(map.w1));
  if (hough.grid.height != hough_rows(hough.h) || hough.grid.width != hough_cols(hough.h))
    throw ArgumentError("hrt: malformed HoughImage grid");

  RadonImage out;
  out.n = map.n;
  out.width = map.width;
  out.w1 = map.w1;
  out.scale_x = map.scale_x;
  out.grid = Image(map.n, map.width);
  for (int j = 0; j < map.n; ++j)
    for (int i = 0; i < map.width; ++i) {
      const RadonHoughMap::Cell& c = map.cell(j, i);
      out.grid.at(j, i) = (c.row >= 0) ? hough.grid.at(c.row, c.col) : 0.0;
    }
  return out;
}

RadonImage hrt(const HoughImage& hough, int n, double scale_x) {
  return hrt(hough, build_map(hough.h, n, scale_x));
}

HoughImage rht(const RadonImage& radon, const RadonHoughMap& map) {
  if (radon.n != map.n || radon.width != map.width)
    throw ArgumentError("rht: radon shape does not match map");
  if (radon.grid.height != radon.n || radon.grid.width != radon.width)
    throw ArgumentError("rht: malformed RadonImage grid");

  HoughImage out;
  out.h = map.w1;
  out.grid = Image(hough_rows(map.w1), hough_cols(map.w1));
  for (int j = 0; j < map.n; ++j)
    for (int i = 0; i < map.width; ++i) {
      const RadonHoughMap::Cell& c = map.cell(j, i);
      if (c.row >= 0) out.grid.at(c.row, c.col) += radon.grid.at(j, i);
    }
  return out;
}

HoughImage rht(const RadonImage& radon, int w1) {
  const RadonHoughMap map = build_map(w1, radon.n, radon.scale_x);
  if (map.width != radon.width)
    throw ArgumentError("rht: radon width " + std::to_string(radon.width) +
                        " inconsistent with w1=" + std::to_string(w1) +
                        " scaleX=" + std::to_string(radon.scale_x));
  return rht(radon, map);
}

FeatureMap hrt_featuremap(const FeatureMap& fm, const RadonHoughMap& map) {
  const int h = map.w1;
  if (fm.height != hough_rows(h) || fm.width != hough_cols(h))
    throw ArgumentError("hrt_featuremap: channel shape does not match map");
  FeatureMap out(fm.channels, map.n, map.width);
  for (int c = 0; c < fm.channels; ++c) {
    HoughImage hough;
    hough.h = h;
    hough.grid = fm.channel(c);
    out.set_channel(c, hrt(hough, map).grid);
  }
  return out;
}

FeatureMap hrt_featuremap(const FeatureMap& fm, int n, double scale_x) {
  const int h = (fm.height + 3) / 4;
  if (fm.height != hough_rows(h) || fm.width != hough_cols(h) || !is_power_of_two(h))
    throw ArgumentError("hrt_featuremap: channel shape is not a stitched Hough map");
  return hrt_featuremap(fm, build_map(h, n, scale_x));
}

FeatureMap rht_featuremap(const FeatureMap& fm, const RadonHoughMap& map) {
  if (fm.height != map.n || fm.width != map.width)
    throw ArgumentError("rht_featuremap: channel shape does not match map");
  FeatureMap out(fm.channels, hough_rows(map.w1), hough_cols(map.w1));
  for (int c = 0; c < fm.channels; ++c) {
    RadonImage radon;
    radon.n = map.n;
    radon.width = map.width;
    radon.w1 = map.w1;
    radon.scale_x = map.scale_x;
    radon.grid = fm.channel(c);
    out.set_channel(c, rht(radon, map).grid);
  }
  return out;
}

FeatureMap rht_featuremap(const FeatureMap& fm, int w1, double scale_x) {
  const RadonHoughMap map = build_map(w1, fm.height, scale_x);
  if (fm.width != map.width)
    throw ArgumentError("rht_featuremap: channel width does not match w1/scaleX");
  return rht_featuremap(fm, map);
}

}  // namespace houghradon
