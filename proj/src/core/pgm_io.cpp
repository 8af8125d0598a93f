#include "pgm_io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>

#include "errors.hpp"

namespace houghradon {

namespace {

// Next whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  return tok;
}

int parse_dim(const std::string& tok, const char* field) {
  if (tok.empty()) throw FormatError(std::string("pgm: missing ") + field);
  for (char ch : tok)
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw FormatError(std::string("pgm: non-numeric ") + field + " '" + tok + "'");
  long v = std::stol(tok);
  if (v <= 0 || v > 1 << 20) throw FormatError(std::string("pgm: bad ") + field + " " + tok);
  return static_cast<int>(v);
}

}  // namespace

Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("pgm: cannot open " + path);

  const std::string magic = next_token(in);
  if (magic != "P5") throw FormatError("pgm: unsupported magic '" + magic + "' (want P5)");
  const int width = parse_dim(next_token(in), "width");
  const int height = parse_dim(next_token(in), "height");
  const std::string maxval = next_token(in);
  if (maxval != "255") throw FormatError("pgm: unsupported maxval '" + maxval + "' (want 255)");
  // The single whitespace byte after maxval was consumed by next_token.

  const size_t count = static_cast<size_t>(width) * height;
  std::vector<uint8_t> bytes(count);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count));
  if (static_cast<size_t>(in.gcount()) != count)
    throw FormatError("pgm: truncated payload in " + path + " (want " + std::to_string(count) +
                      " bytes, got " + std::to_string(in.gcount()) + ")");

  Image img(height, width);
  for (size_t i = 0; i < count; ++i) img.values[i] = bytes[i] / 255.0;
  return img;
}

void write_pgm(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("pgm: cannot open " + path + " for writing");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<uint8_t> bytes(img.size());
  for (size_t i = 0; i < img.size(); ++i) {
    double v = img.values[i];
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    bytes[i] = static_cast<uint8_t>(std::lround(v * 255.0));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("pgm: write failed for " + path);
}

}  // namespace houghradon
