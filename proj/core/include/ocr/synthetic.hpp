#pragma once

#include "ocr/dataset.hpp"
#include "ocr/image.hpp"
#include "ocr/segment.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ocr {

struct LabeledBox {
    int label = 0;
    Box box;
};

struct SyntheticPage {
    GrayImage page;
    std::vector<LabeledBox> truth; // tight ink boxes, reading order
};

struct SyntheticParams {
    int page_width = 360;
    int page_height = 88;
    int margin = 10;
    int spacing = 12;
    int scale = 2;                // integer upscale of each 28x28 glyph
    double noise_fraction = 0.0;  // pixels forced to 0 or 255, exact count
    bool margin_lines = false;    // ruled-paper lines outside the truth set
};

// Renders dark glyphs left to right on a light page, then salt-and-pepper
// noise from the seed.  Throws when the row of glyphs does not fit.
SyntheticPage make_synthetic_page(std::span<const Example> digits, const SyntheticParams& p,
                                  std::uint64_t seed);

// Round-stroke rendering of a digit, values in {0,1}; 0, 6, 8, and 9 are
// the digits with enclosed holes.
Glyph28 digit_glyph(int digit);

} // namespace ocr
