#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace ocr {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Writes to a sibling temp file and renames into place, so a failure
/// part-way never leaves a truncated file at `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Decompresses a gzip member (the wrapper used by the standard MNIST
/// distribution). Throws format_error on malformed input.
std::vector<std::uint8_t> gzip_inflate(std::span<const std::uint8_t> bytes);

} // namespace ocr
