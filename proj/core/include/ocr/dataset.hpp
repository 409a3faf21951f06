#pragma once

#include "ocr/glyph.hpp"
#include "ocr/image.hpp"
#include "ocr/segment.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ocr {

struct Example {
    Glyph28 glyph;
    std::uint8_t label = 0;
};

struct Dataset {
    std::vector<Example> examples;
    std::string source;

    std::size_t size() const { return examples.size(); }
    bool empty() const { return examples.empty(); }
};

struct IdxHeader {
    std::uint32_t magic = 0;
    std::vector<std::uint32_t> dims;
};

// IDX container parsing (big-endian header).  Images require magic
// 0x00000803 with dims [count, 28, 28]; labels require 0x00000801 with
// every byte <= 9.  Any defect throws format_error; no partial output.
IdxHeader parse_idx_header(std::span<const std::uint8_t> bytes);
std::vector<GrayImage> parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);

// Reads the four standard IDX files from dir (plain or .gz), scales pixels
// to [0,1] by /255.
std::pair<Dataset, Dataset> load_mnist(const std::filesystem::path& dir);

// Walks dir/<digit>/*.pgm, segments each page, labels every glyph by its
// parent directory.  Non-digit directories and unreadable files are skipped
// with a note on stderr; page order is sorted by path for determinism.
Dataset ingest_custom_dir(const std::filesystem::path& dir, const SegmentConfig& cfg = {});

// Seeded Fisher-Yates shuffle, then a prefix/suffix split; requires
// 0 < train_fraction < 1.
std::pair<Dataset, Dataset> shuffle_split(const Dataset& data, double train_fraction,
                                          std::uint64_t seed);

} // namespace ocr
