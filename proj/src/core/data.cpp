#include "data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "errors.hpp"
#include "pgm_io.hpp"
#include "rng.hpp"

namespace fs = std::filesystem;

namespace houghradon {

namespace {

double shoelace_area(const QuadAnnotation& q) {
  double a = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto& p = q.pts[static_cast<size_t>(i)];
    const auto& r = q.pts[static_cast<size_t>((i + 1) % 4)];
    a += p[0] * r[1] - r[0] * p[1];
  }
  return 0.5 * a;
}

bool is_convex(const QuadAnnotation& q) {
  int sign = 0;
  for (int i = 0; i < 4; ++i) {
    const auto& a = q.pts[static_cast<size_t>(i)];
    const auto& b = q.pts[static_cast<size_t>((i + 1) % 4)];
    const auto& c = q.pts[static_cast<size_t>((i + 2) % 4)];
    const double cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
    if (cross == 0.0) continue;
    const int s = cross > 0 ? 1 : -1;
    if (sign == 0)
      sign = s;
    else if (s != sign)
      return false;
  }
  return sign != 0;
}

}  // namespace

RasterResult rasterize_quad(const QuadAnnotation& quad, int out_size) {
  if (out_size <= 0) throw ArgumentError("rasterize_quad: out_size must be positive");
  RasterResult res;
  res.mask = Image(out_size, out_size);
  if (std::abs(shoelace_area(quad)) < 1e-12) {
    res.degenerate = true;
    return res;
  }

  // Orient counter-clockwise in (x right, y down) terms so the inside test
  // has one sign.
  QuadAnnotation q = quad;
  if (shoelace_area(q) < 0.0) std::swap(q.pts[1], q.pts[3]);

  for (int y = 0; y < out_size; ++y) {
    const double cy = y + 0.5;
    // Intersect the scanline with all edges; convexity gives one interval.
    double xmin = 1e30, xmax = -1e30;
    bool hit = false;
    for (int e = 0; e < 4; ++e) {
      const auto& a = q.pts[static_cast<size_t>(e)];
      const auto& b = q.pts[static_cast<size_t>((e + 1) % 4)];
      const double y0 = a[1], y1 = b[1];
      if ((y0 <= cy && y1 > cy) || (y1 <= cy && y0 > cy)) {
        const double x = a[0] + (b[0] - a[0]) * (cy - y0) / (y1 - y0);
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        hit = true;
      }
    }
    if (!hit) continue;
    const int x_lo = std::max(0, static_cast<int>(std::ceil(xmin - 0.5)));
    const int x_hi = std::min(out_size - 1, static_cast<int>(std::floor(xmax - 0.5)));
    for (int x = x_lo; x <= x_hi; ++x) res.mask.at(y, x) = 1.0;
  }
  return res;
}

int corners_inside_count(const QuadAnnotation& quad, int frame_w, int frame_h) {
  int count = 0;
  for (const auto& p : quad.pts)
    if (p[0] >= 0.0 && p[0] < frame_w && p[1] >= 0.0 && p[1] < frame_h) ++count;
  return count;
}

namespace {

constexpr int kNetSize = 256;
constexpr int kTrainTypes = 30;

Image resize_nearest(const Image& src, int out_size) {
  Image out(out_size, out_size);
  for (int y = 0; y < out_size; ++y) {
    int sy = static_cast<int>((y + 0.5) * src.height / out_size);
    sy = std::clamp(sy, 0, src.height - 1);
    for (int x = 0; x < out_size; ++x) {
      int sx = static_cast<int>((x + 0.5) * src.width / out_size);
      sx = std::clamp(sx, 0, src.width - 1);
      out.at(y, x) = src.at(sy, sx);
    }
  }
  return out;
}

bool parse_quad(const fs::path& json_path, QuadAnnotation* out) {
  std::ifstream in(json_path);
  if (!in) return false;
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception&) {
    return false;
  }
  if (!doc.contains("quad") || !doc["quad"].is_array() || doc["quad"].size() != 4) return false;
  for (size_t k = 0; k < 4; ++k) {
    const auto& pt = doc["quad"][k];
    if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
      return false;
    out->pts[k] = {pt[0].get<double>(), pt[1].get<double>()};
  }
  return true;
}

fs::path annotation_for(const fs::path& image_path) {
  fs::path sibling = image_path;
  sibling.replace_extension(".json");
  if (fs::exists(sibling)) return sibling;
  // MIDV layout: <type>/images/<clip>/<frame>.pgm <-> <type>/ground_truth/...
  std::vector<std::string> parts;
  for (const auto& p : image_path) parts.push_back(p.string());
  for (size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] == "images") {
      fs::path alt;
      for (size_t k = 0; k < parts.size(); ++k) alt /= (k == i) ? "ground_truth" : parts[k];
      alt.replace_extension(".json");
      if (fs::exists(alt)) return alt;
    }
  }
  return {};
}

}  // namespace

std::vector<Sample> ingest_midv(const std::string& root, IngestStats* stats) {
  if (!fs::is_directory(root)) throw ArgumentError("ingest_midv: not a directory: " + root);

  std::vector<fs::path> type_dirs;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) type_dirs.push_back(entry.path());
  std::sort(type_dirs.begin(), type_dirs.end());

  IngestStats local;
  std::vector<Sample> samples;
  for (size_t type_idx = 0; type_idx < type_dirs.size(); ++type_idx) {
    const Split split = type_idx < kTrainTypes ? Split::Train : Split::Test;
    std::vector<fs::path> images;
    for (const auto& entry : fs::recursive_directory_iterator(type_dirs[type_idx]))
      if (entry.is_regular_file() && entry.path().extension() == ".pgm")
        images.push_back(entry.path());
    std::sort(images.begin(), images.end());

    for (const auto& img_path : images) {
      const fs::path ann = annotation_for(img_path);
      QuadAnnotation quad;
      if (ann.empty() || !parse_quad(ann, &quad)) {
        std::cerr << "ingest_midv: skipping " << img_path << " (missing or malformed annotation)\n";
        ++local.skipped;
        continue;
      }
      Image src;
      try {
        src = read_pgm(img_path.string());
      } catch (const std::exception& e) {
        std::cerr << "ingest_midv: skipping " << img_path << " (" << e.what() << ")\n";
        ++local.skipped;
        continue;
      }
      // Scale quad coordinates into the 256x256 frame before any filtering.
      QuadAnnotation scaled;
      for (size_t k = 0; k < 4; ++k)
        scaled.pts[k] = {quad.pts[k][0] * kNetSize / src.width,
                         quad.pts[k][1] * kNetSize / src.height};
      if (corners_inside_count(scaled, kNetSize, kNetSize) < 3) continue;

      Sample s;
      s.image = resize_nearest(src, kNetSize);
      s.mask = rasterize_quad(scaled, kNetSize).mask;
      s.source_id = fs::relative(img_path, root).string();
      s.split = split;
      samples.push_back(std::move(s));
    }
  }
  if (stats) *stats = local;
  return samples;
}

namespace {

QuadAnnotation random_convex_quad(Rng& rng, int size) {
  const double lo = 0.1 * size * size;
  const double hi = 0.8 * size * size;
  for (;;) {
    QuadAnnotation q;
    const double cx = rng.uniform(0.3, 0.7) * size;
    const double cy = rng.uniform(0.3, 0.7) * size;
    double base = rng.uniform(0.0, 6.283185307179586);
    for (int k = 0; k < 4; ++k) {
      const double ang = base + k * 1.5707963267948966 + rng.uniform(-0.5, 0.5);
      const double r = rng.uniform(0.18, 0.55) * size;
      q.pts[static_cast<size_t>(k)] = {cx + r * std::cos(ang), cy + r * std::sin(ang)};
    }
    const double area = std::abs(shoelace_area(q));
    if (is_convex(q) && area >= lo && area <= hi) return q;
  }
}

void draw_line(Image& img, Rng& rng) {
  const int size = img.width;
  const double x0 = rng.uniform(0.0, size), y0 = rng.uniform(0.0, size);
  const double ang = rng.uniform(0.0, 6.283185307179586);
  const double value = rng.uniform() < 0.5 ? 0.0 : 1.0;
  const double dx = std::cos(ang), dy = std::sin(ang);
  for (double u = -1.5 * size; u <= 1.5 * size; u += 0.5) {
    const int x = static_cast<int>(std::lround(x0 + u * dx));
    const int y = static_cast<int>(std::lround(y0 + u * dy));
    if (x >= 0 && x < size && y >= 0 && y < size) img.at(y, x) = value;
  }
}

void box_blur3(Image& img) {
  const Image src = img;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      int cnt = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int yy = y + dy, xx = x + dx;
          if (yy < 0 || yy >= img.height || xx < 0 || xx >= img.width) continue;
          acc += src.at(yy, xx);
          ++cnt;
        }
      img.at(y, x) = acc / cnt;
    }
}

}  // namespace

std::vector<Sample> synth_dataset(int count, int size, uint64_t seed, unsigned distortions) {
  if (count < 0) throw ArgumentError("synth_dataset: count must be non-negative");
  if (!is_power_of_two(size)) throw ArgumentError("synth_dataset: size must be a power of two");

  Rng rng(seed);
  std::vector<Sample> samples;
  samples.reserve(static_cast<size_t>(count));
  const int train_count = static_cast<int>(std::lround(count * 0.8));

  for (int idx = 0; idx < count; ++idx) {
    const QuadAnnotation quad = random_convex_quad(rng, size);
    // Document-like contrast: the quad is the bright region.
    const double bg = rng.uniform(0.05, 0.40);
    const double fg = rng.uniform(0.60, 0.95);

    Sample s;
    s.mask = rasterize_quad(quad, size).mask;
    s.image = Image(size, size);
    for (size_t i = 0; i < s.image.size(); ++i)
      s.image.values[i] = s.mask.values[i] != 0.0 ? fg : bg;

    if ((distortions & distortion::kHighlight) && rng.uniform() < 0.5) {
      const double hx = rng.uniform(0.2, 0.8) * size, hy = rng.uniform(0.2, 0.8) * size;
      const double rx = rng.uniform(0.05, 0.2) * size, ry = rng.uniform(0.05, 0.2) * size;
      const double gain = rng.uniform(0.3, 0.6);
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
          const double dx = (x - hx) / rx, dy = (y - hy) / ry;
          const double d2 = dx * dx + dy * dy;
          if (d2 < 4.0) s.image.at(y, x) += gain * std::exp(-d2);
        }
    }
    if ((distortions & distortion::kLines) && rng.uniform() < 0.5) {
      const int n_lines = 1 + rng.uniform_int(3);
      for (int k = 0; k < n_lines; ++k) draw_line(s.image, rng);
    }
    if ((distortions & distortion::kNoise) && rng.uniform() < 0.5) {
      const double sigma = rng.uniform(0.02, 0.1);
      for (double& v : s.image.values) v += sigma * rng.normal();
    }
    if ((distortions & distortion::kBlur) && rng.uniform() < 0.5) box_blur3(s.image);
    if ((distortions & distortion::kDarken) && rng.uniform() < 0.5) {
      const double f = rng.uniform(0.5, 0.9);
      for (double& v : s.image.values) v *= f;
    }
    for (double& v : s.image.values) v = std::clamp(v, 0.0, 1.0);

    s.source_id = "synth/" + std::to_string(idx);
    s.split = idx < train_count ? Split::Train : Split::Test;
    samples.push_back(std::move(s));
  }
  return samples;
}

void export_dataset(const std::vector<Sample>& samples, const std::string& dir) {
  fs::create_directories(dir);
  std::ofstream csv(fs::path(dir) / "index.csv");
  if (!csv) throw IoError("export_dataset: cannot write index.csv in " + dir);
  csv << "index,image,mask,split\n";
  char name[64];
  for (size_t i = 0; i < samples.size(); ++i) {
    std::snprintf(name, sizeof name, "img_%05zu.pgm", i);
    const std::string img_name = name;
    std::snprintf(name, sizeof name, "mask_%05zu.pgm", i);
    const std::string mask_name = name;
    write_pgm(samples[i].image, (fs::path(dir) / img_name).string());
    write_pgm(samples[i].mask, (fs::path(dir) / mask_name).string());
    csv << i << "," << img_name << "," << mask_name << ","
        << (samples[i].split == Split::Train ? "train" : "test") << "\n";
  }
}

}  // namespace houghradon
