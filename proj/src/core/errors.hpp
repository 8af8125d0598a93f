#pragma once

#include <stdexcept>
#include <string>

namespace houghradon {

// Invalid argument or shape passed to an operation.
struct ArgumentError : std::invalid_argument {
  explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Malformed file contents (PGM header, tensor header, annotation JSON).
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem-level failure; the message carries the path.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace houghradon
