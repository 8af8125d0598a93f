#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>

#include "core/errors.hpp"
#include "core/pgm_io.hpp"
#include "core/rng.hpp"
#include "core/tensor_io.hpp"

using namespace houghradon;
namespace fs = std::filesystem;

namespace {

fs::path tmp_file(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("houghradon_test_" + name);
  fs::remove(p);
  return p;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("read_pgm maps bytes to [0,1]") {
  const fs::path p = tmp_file("basic.pgm");
  write_bytes(p, std::string("P5\n2 2\n255\n") + '\x00' + '\xff' + '\x80' + '\x40');
  const Image img = read_pgm(p.string());
  CHECK(img.height == 2);
  CHECK(img.width == 2);
  CHECK(img.values[0] == 0.0);
  CHECK(img.values[1] == 1.0);
  CHECK(img.values[2] == doctest::Approx(128.0 / 255.0).epsilon(1e-15));
  CHECK(img.values[3] == doctest::Approx(64.0 / 255.0).epsilon(1e-15));
}

TEST_CASE("read_pgm handles comments and whitespace") {
  const fs::path p = tmp_file("comment.pgm");
  write_bytes(p, std::string("P5\n# a comment\n 1   1 \n255\n") + '\x7f');
  const Image img = read_pgm(p.string());
  CHECK(img.values[0] == doctest::Approx(127.0 / 255.0));
}

TEST_CASE("read_pgm rejects P2") {
  const fs::path p = tmp_file("ascii.pgm");
  write_bytes(p, "P2\n2 2\n255\n0 1 2 3\n");
  CHECK_THROWS_WITH_AS(read_pgm(p.string()), doctest::Contains("magic"), FormatError);
}

TEST_CASE("read_pgm rejects truncated payload") {
  const fs::path p = tmp_file("short.pgm");
  write_bytes(p, std::string("P5\n4 4\n255\n") + std::string(15, '\x01'));
  CHECK_THROWS_WITH_AS(read_pgm(p.string()), doctest::Contains("truncated"), FormatError);
}

TEST_CASE("read_pgm rejects unsupported maxval") {
  const fs::path p = tmp_file("maxval.pgm");
  write_bytes(p, std::string("P5\n1 1\n65535\n") + std::string(2, '\x01'));
  CHECK_THROWS_WITH_AS(read_pgm(p.string()), doctest::Contains("maxval"), FormatError);
}

TEST_CASE("read_pgm reports missing file as IO error") {
  CHECK_THROWS_AS(read_pgm("/nonexistent/path.pgm"), IoError);
}

TEST_CASE("write_pgm quantizes, clamps and rounds half away from zero") {
  const fs::path p = tmp_file("write.pgm");

  Image img(1, 2);
  img.values = {0.0, 1.0};
  write_pgm(img, p.string());
  std::string bytes = read_bytes(p);
  REQUIRE(bytes.size() >= 2);
  CHECK(static_cast<uint8_t>(bytes[bytes.size() - 2]) == 0);
  CHECK(static_cast<uint8_t>(bytes[bytes.size() - 1]) == 255);

  img.values = {-0.5, 2.0};
  write_pgm(img, p.string());
  bytes = read_bytes(p);
  CHECK(static_cast<uint8_t>(bytes[bytes.size() - 2]) == 0);
  CHECK(static_cast<uint8_t>(bytes[bytes.size() - 1]) == 255);

  Image half(1, 1);
  half.values = {0.5};  // 127.5 rounds away from zero
  write_pgm(half, p.string());
  bytes = read_bytes(p);
  CHECK(static_cast<uint8_t>(bytes.back()) == 128);
}

TEST_CASE("pgm round-trip is lossless at 8-bit precision") {
  const fs::path p = tmp_file("roundtrip.pgm");
  Rng rng(123);
  for (int iter = 0; iter < 10; ++iter) {
    Image img(5, 7);
    for (double& v : img.values) v = rng.uniform(-0.2, 1.2);
    const Image before = img;
    write_pgm(img, p.string());
    CHECK(img.values == before.values);  // input not mutated
    const Image back = read_pgm(p.string());
    for (size_t i = 0; i < img.size(); ++i) {
      const double clamped = std::clamp(img.values[i], 0.0, 1.0);
      const double quantized = std::round(clamped * 255.0) / 255.0;
      CHECK(back.values[i] == doctest::Approx(quantized).epsilon(1e-15));
    }
    // A second write of the re-read image reproduces the file exactly.
    const std::string bytes1 = read_bytes(p);
    write_pgm(back, p.string());
    CHECK(read_bytes(p) == bytes1);
  }
}

TEST_CASE("tensor header and payload layout") {
  const fs::path p = tmp_file("basic.tensor");
  FeatureMap fm(1, 2, 2);
  fm.values = {1.0, 2.0, 3.0, 4.0};
  write_tensor(fm, p.string());

  const std::string bytes = read_bytes(p);
  REQUIRE(bytes.size() == 32);  // 16-byte header + 4 float32
  CHECK(bytes.substr(0, 4) == "HRT1");
  CHECK(static_cast<uint8_t>(bytes[4]) == 1);   // channels, little-endian
  CHECK(static_cast<uint8_t>(bytes[8]) == 2);   // height
  CHECK(static_cast<uint8_t>(bytes[12]) == 2);  // width

  const FeatureMap back = read_tensor(p.string());
  CHECK(back.channels == 1);
  CHECK(back.values == fm.values);
}

TEST_CASE("tensor rejects bad magic") {
  const fs::path p = tmp_file("magic.tensor");
  std::string bytes(16, '\0');
  bytes.replace(0, 4, "HRT2");
  bytes[4] = 1;
  bytes[8] = 1;
  bytes[12] = 1;
  write_bytes(p, bytes + std::string(4, '\0'));
  CHECK_THROWS_WITH_AS(read_tensor(p.string()), doctest::Contains("magic"), FormatError);
}

TEST_CASE("tensor rejects dimension/payload mismatch") {
  const fs::path p = tmp_file("mismatch.tensor");
  std::string bytes(16, '\0');
  bytes.replace(0, 4, "HRT1");
  bytes[4] = 2;  // 2x2x2 = 8 values, but only 4 provided
  bytes[8] = 2;
  bytes[12] = 2;
  write_bytes(p, bytes + std::string(16, '\0'));
  CHECK_THROWS_AS(read_tensor(p.string()), FormatError);
}

TEST_CASE("tensor round-trip is bit-exact at float32 precision") {
  const fs::path p = tmp_file("roundtrip.tensor");
  Rng rng(77);
  FeatureMap fm(3, 4, 5);
  for (double& v : fm.values) v = static_cast<float>(rng.uniform(-100.0, 100.0));
  write_tensor(fm, p.string());
  const FeatureMap back = read_tensor(p.string());
  CHECK(back.channels == 3);
  CHECK(back.height == 4);
  CHECK(back.width == 5);
  CHECK(back.values == fm.values);

  const std::string bytes1 = read_bytes(p);
  write_tensor(back, p.string());
  CHECK(read_bytes(p) == bytes1);
}
