#include "tensor_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "errors.hpp"

namespace houghradon {

namespace {

constexpr char kMagic[4] = {'H', 'R', 'T', '1'};

uint32_t load_u32le(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

void store_u32le(uint8_t* p, uint32_t v) {
  p[0] = static_cast<uint8_t>(v);
  p[1] = static_cast<uint8_t>(v >> 8);
  p[2] = static_cast<uint8_t>(v >> 16);
  p[3] = static_cast<uint8_t>(v >> 24);
}

}  // namespace

FeatureMap read_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("tensor: cannot open " + path);

  uint8_t header[16];
  in.read(reinterpret_cast<char*>(header), 16);
  if (in.gcount() != 16) throw FormatError("tensor: truncated header in " + path);
  if (std::memcmp(header, kMagic, 4) != 0)
    throw FormatError("tensor: bad magic '" + std::string(header, header + 4) + "' (want HRT1)");

  const uint32_t c = load_u32le(header + 4);
  const uint32_t h = load_u32le(header + 8);
  const uint32_t w = load_u32le(header + 12);
  if (c == 0 || h == 0 || w == 0) throw FormatError("tensor: zero dimension in header");
  const uint64_t count = static_cast<uint64_t>(c) * h * w;
  if (count > (1ull << 31)) throw FormatError("tensor: header dimensions too large");

  std::vector<uint8_t> payload(count * 4);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (static_cast<uint64_t>(in.gcount()) != payload.size())
    throw FormatError("tensor: payload size mismatch in " + path + " (header says " +
                      std::to_string(count) + " values)");
  // Trailing bytes also indicate a dimension/payload mismatch.
  if (in.peek() != EOF) throw FormatError("tensor: trailing bytes after payload in " + path);

  FeatureMap fm(static_cast<int>(c), static_cast<int>(h), static_cast<int>(w));
  for (uint64_t i = 0; i < count; ++i) {
    const uint32_t bits = load_u32le(payload.data() + i * 4);
    float f;
    std::memcpy(&f, &bits, 4);
    if (!std::isfinite(f))
      throw FormatError("tensor: non-finite value at index " + std::to_string(i) + " in " + path);
    fm.values[i] = static_cast<double>(f);
  }
  return fm;
}

void write_tensor(const FeatureMap& fm, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("tensor: cannot open " + path + " for writing");

  uint8_t header[16];
  std::memcpy(header, kMagic, 4);
  store_u32le(header + 4, static_cast<uint32_t>(fm.channels));
  store_u32le(header + 8, static_cast<uint32_t>(fm.height));
  store_u32le(header + 12, static_cast<uint32_t>(fm.width));
  out.write(reinterpret_cast<const char*>(header), 16);

  std::vector<uint8_t> payload(fm.size() * 4);
  for (size_t i = 0; i < fm.size(); ++i) {
    const float f = static_cast<float>(fm.values[i]);
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    store_u32le(payload.data() + i * 4, bits);
  }
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError("tensor: write failed for " + path);
}

Image read_tensor_image(const std::string& path) {
  FeatureMap fm = read_tensor(path);
  if (fm.channels != 1)
    throw FormatError("tensor: expected single-channel tensor in " + path + ", got " +
                      std::to_string(fm.channels) + " channels");
  return fm.channel(0);
}

void write_tensor_image(const Image& img, const std::string& path) {
  FeatureMap fm(1, img.height, img.width);
  fm.set_channel(0, img);
  write_tensor(fm, path);
}

}  // namespace houghradon
