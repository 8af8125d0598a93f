#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "core/data.hpp"
#include "core/errors.hpp"
#include "core/pgm_io.hpp"
#include "core/rng.hpp"

using namespace houghradon;
namespace fs = std::filesystem;

namespace {

QuadAnnotation quad_of(std::initializer_list<std::array<double, 2>> pts) {
  QuadAnnotation q;
  size_t i = 0;
  for (const auto& p : pts) q.pts[i++] = p;
  return q;
}

double mask_area(const Image& mask) {
  double area = 0.0;
  for (double v : mask.values) area += v;
  return area;
}

double quad_perimeter(const QuadAnnotation& q) {
  double per = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto& a = q.pts[static_cast<size_t>(i)];
    const auto& b = q.pts[static_cast<size_t>((i + 1) % 4)];
    per += std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  return per;
}

double shoelace(const QuadAnnotation& q) {
  double a = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto& p = q.pts[static_cast<size_t>(i)];
    const auto& r = q.pts[static_cast<size_t>((i + 1) % 4)];
    a += p[0] * r[1] - r[0] * p[1];
  }
  return std::abs(a) / 2.0;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("houghradon_data_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

void write_gray_pgm(const fs::path& p, int size, uint8_t value) {
  std::ofstream out(p, std::ios::binary);
  out << "P5\n" << size << " " << size << "\n255\n";
  const std::string payload(static_cast<size_t>(size) * size, static_cast<char>(value));
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

}  // namespace

TEST_CASE("axis-aligned quad fills the expected pixels") {
  const QuadAnnotation q = quad_of({{0, 0}, {2, 0}, {2, 4}, {0, 4}});
  const RasterResult res = rasterize_quad(q, 4);
  CHECK_FALSE(res.degenerate);
  CHECK(mask_area(res.mask) == 8.0);
  for (int y = 0; y < 4; ++y) {
    CHECK(res.mask.at(y, 0) == 1.0);
    CHECK(res.mask.at(y, 1) == 1.0);
    CHECK(res.mask.at(y, 2) == 0.0);
    CHECK(res.mask.at(y, 3) == 0.0);
  }
}

TEST_CASE("quad outside the frame gives an empty mask") {
  const QuadAnnotation q = quad_of({{-10, -10}, {-5, -10}, {-5, -5}, {-10, -5}});
  const RasterResult res = rasterize_quad(q, 8);
  CHECK_FALSE(res.degenerate);
  CHECK(mask_area(res.mask) == 0.0);
}

TEST_CASE("degenerate quad is flagged") {
  const QuadAnnotation q = quad_of({{1, 1}, {1, 1}, {1, 1}, {1, 1}});
  const RasterResult res = rasterize_quad(q, 8);
  CHECK(res.degenerate);
  CHECK(mask_area(res.mask) == 0.0);
}

TEST_CASE("mask area tracks the shoelace area for random convex quads") {
  Rng rng(15);
  int checked = 0;
  while (checked < 20) {
    // sample a convex quad well inside a 256 frame
    const double cx = rng.uniform(80.0, 176.0), cy = rng.uniform(80.0, 176.0);
    QuadAnnotation q;
    const double base = rng.uniform(0.0, 6.28);
    for (int k = 0; k < 4; ++k) {
      const double ang = base + k * 1.5707963 + rng.uniform(-0.4, 0.4);
      const double r = rng.uniform(20.0, 70.0);
      q.pts[static_cast<size_t>(k)] = {cx + r * std::cos(ang), cy + r * std::sin(ang)};
    }
    const double area = shoelace(q);
    if (area < 900.0) continue;
    ++checked;
    const RasterResult res = rasterize_quad(q, 256);
    CHECK(std::abs(mask_area(res.mask) - area) <= 2.0 * quad_perimeter(q));
  }
}

TEST_CASE("corners_inside_count uses half-open bounds") {
  CHECK(corners_inside_count(quad_of({{1, 1}, {2, 1}, {2, 2}, {1, 2}}), 4, 4) == 4);
  CHECK(corners_inside_count(quad_of({{-1, -1}, {-1, -1}, {-1, -1}, {-1, -1}}), 4, 4) == 0);
  // a corner exactly at x == W is outside
  CHECK(corners_inside_count(quad_of({{4, 1}, {2, 1}, {2, 2}, {1, 2}}), 4, 4) == 3);
  CHECK(corners_inside_count(quad_of({{3.999, 1}, {2, 1}, {2, 2}, {1, 2}}), 4, 4) == 4);
}

TEST_CASE("midv ingestion filters, scales and splits") {
  const fs::path root = fresh_dir("midv");
  // 2 document types x 3 images; one annotation keeps only 2 corners inside.
  for (int type = 0; type < 2; ++type) {
    const fs::path dir = root / ("0" + std::to_string(type + 1) + "_doc");
    fs::create_directories(dir);
    for (int k = 0; k < 3; ++k) {
      const std::string stem = "frame" + std::to_string(k);
      write_gray_pgm(dir / (stem + ".pgm"), 16, 200);
      if (type == 1 && k == 2) {
        // only corners (2,2) and (14,2) fall inside after scaling
        write_text(dir / (stem + ".json"),
                   R"({"quad": [[2, 2], [14, 2], [40, 20], [-5, 20]]})");
      } else {
        write_text(dir / (stem + ".json"), R"({"quad": [[2, 2], [14, 2], [14, 13], [2, 13]]})");
      }
    }
  }

  IngestStats stats;
  const std::vector<Sample> samples = ingest_midv(root.string(), &stats);
  CHECK(samples.size() == 5);
  CHECK(stats.skipped == 0);
  for (const Sample& s : samples) {
    CHECK(s.image.height == 256);
    CHECK(s.image.width == 256);
    CHECK(s.mask.height == 256);
    CHECK(s.split == Split::Train);  // both types fall in the first 30
    for (double v : s.mask.values) CHECK((v == 0.0 || v == 1.0));
    for (double v : s.image.values) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  // quad (2..14, 2..13) of a 16x16 frame scales by 16 to (32..224, 32..208)
  const double area = mask_area(samples[0].mask);
  CHECK(area == doctest::Approx(192.0 * 176.0).epsilon(0.05));

  // ingestion is idempotent and order-deterministic
  const std::vector<Sample> again = ingest_midv(root.string());
  REQUIRE(again.size() == samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    CHECK(again[i].source_id == samples[i].source_id);
    CHECK(again[i].image.values == samples[i].image.values);
  }
}

TEST_CASE("midv ingestion counts malformed annotations as skipped") {
  const fs::path root = fresh_dir("midv_bad");
  const fs::path dir = root / "01_doc";
  fs::create_directories(dir);
  write_gray_pgm(dir / "a.pgm", 16, 100);
  write_text(dir / "a.json", "{not json");
  write_gray_pgm(dir / "b.pgm", 16, 100);  // no annotation at all

  IngestStats stats;
  const std::vector<Sample> samples = ingest_midv(root.string(), &stats);
  CHECK(samples.empty());
  CHECK(stats.skipped == 2);
}

TEST_CASE("midv ingestion of an empty directory") {
  const fs::path root = fresh_dir("midv_empty");
  IngestStats stats;
  CHECK(ingest_midv(root.string(), &stats).empty());
  CHECK(stats.skipped == 0);
  CHECK_THROWS_AS(ingest_midv((root / "missing").string()), ArgumentError);
}

TEST_CASE("midv layout with images/ and ground_truth/ subtrees") {
  const fs::path root = fresh_dir("midv_layout");
  fs::create_directories(root / "01_doc/images/CA");
  fs::create_directories(root / "01_doc/ground_truth/CA");
  write_gray_pgm(root / "01_doc/images/CA/f0.pgm", 16, 50);
  write_text(root / "01_doc/ground_truth/CA/f0.json",
             R"({"quad": [[2, 2], [14, 2], [14, 13], [2, 13]], "extra": 1})");
  const std::vector<Sample> samples = ingest_midv(root.string());
  CHECK(samples.size() == 1);
}

TEST_CASE("synthetic dataset is deterministic and well-formed") {
  const std::vector<Sample> a = synth_dataset(10, 32, 99, distortion::kAll);
  const std::vector<Sample> b = synth_dataset(10, 32, 99, distortion::kAll);
  REQUIRE(a.size() == 10);
  int train = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].image.values == b[i].image.values);
    CHECK(a[i].mask.values == b[i].mask.values);
    CHECK(a[i].image.height == 32);
    if (a[i].split == Split::Train) ++train;
    for (double v : a[i].mask.values) CHECK((v == 0.0 || v == 1.0));
    for (double v : a[i].image.values) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    const double area = mask_area(a[i].mask);
    CHECK(area >= 0.05 * 32 * 32);  // quad area (10%..80%) minus rasterization slack
    CHECK(area <= 0.85 * 32 * 32);
  }
  CHECK(train == 8);
  CHECK(synth_dataset(0, 32, 1, distortion::kAll).empty());

  const std::vector<Sample> c = synth_dataset(4, 32, 123, distortion::kAll);
  CHECK(c[0].image.values != a[0].image.values);  // seed matters
}

TEST_CASE("with distortions off the image is the two-level quad") {
  const std::vector<Sample> samples = synth_dataset(5, 32, 7, 0);
  for (const Sample& s : samples) {
    double in_level = -1.0, out_level = -1.0;
    bool two_level = true;
    for (size_t i = 0; i < s.image.size(); ++i) {
      double& level = s.mask.values[i] != 0.0 ? in_level : out_level;
      if (level < 0.0)
        level = s.image.values[i];
      else if (level != s.image.values[i])
        two_level = false;
    }
    CHECK(two_level);
    CHECK(std::abs(in_level - out_level) > 0.15);
  }
}

TEST_CASE("export writes paired PGMs and an index") {
  const fs::path dir = fresh_dir("export");
  const std::vector<Sample> samples = synth_dataset(3, 32, 5, 0);
  export_dataset(samples, dir.string());

  CHECK(fs::exists(dir / "index.csv"));
  CHECK(fs::exists(dir / "img_00000.pgm"));
  CHECK(fs::exists(dir / "mask_00002.pgm"));

  std::ifstream csv(dir / "index.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "index,image,mask,split");

  const Image img = read_pgm((dir / "img_00001.pgm").string());
  CHECK(img.height == 32);
}
