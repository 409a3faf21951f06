#pragma once

#include <stdexcept>
#include <string>

namespace ocr {

/// Malformed file contents or inconsistent data (bad magic, truncated
/// raster, count mismatch). Distinct from io_error so callers can map
/// the two to different exit codes.
class format_error : public std::runtime_error {
public:
    explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem-level failure: file missing, unreadable, or unwritable.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ocr
