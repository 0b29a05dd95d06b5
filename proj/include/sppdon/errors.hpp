#pragma once

#include <stdexcept>
#include <string>

namespace sppdon {

/// Thrown when a numerical procedure fails (factorization breakdown,
/// diverged training, residual out of bounds).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a serialized artifact (dataset, model) cannot be parsed.
/// Carries the byte offset at which decoding failed, -1 if unknown.
class format_error : public std::runtime_error {
public:
    format_error(const std::string& what, long long byte_offset = -1)
        : std::runtime_error(byte_offset >= 0
                                 ? what + " (byte offset " + std::to_string(byte_offset) + ")"
                                 : what),
          offset_(byte_offset) {}
    long long byte_offset() const noexcept { return offset_; }

private:
    long long offset_;
};

/// Thrown when a requested problem size exceeds the configured guard.
class too_large_error : public std::invalid_argument {
public:
    explicit too_large_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace sppdon
