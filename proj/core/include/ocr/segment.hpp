#pragma once

#include "ocr/glyph.hpp"
#include "ocr/image.hpp"
#include "ocr/preprocess.hpp"

#include <utility>
#include <vector>

namespace ocr {

struct Box {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    friend bool operator==(const Box&, const Box&) = default;
};

// True when a encloses b (non-strict on every edge, so a box contains itself).
bool box_contains(const Box& a, const Box& b);

struct Component {
    Box box;
    std::vector<std::pair<int, int>> pixels; // (row, col)

    std::size_t pixel_count() const { return pixels.size(); }
};

// Maximal 8-connected foreground components with at least min_area pixels,
// each with its tight bounding box, in first-encounter scan order.
std::vector<Component> find_components(const BinaryImage& img, int min_area = 1);

// Collapses exact duplicates, then deletes every box fully enclosed by a
// distinct surviving box.  Kept boxes retain first-occurrence order.
std::vector<Box> dedup_boxes(const std::vector<Box>& boxes);

// Reading order: ascending x, then y, then width, then height.
std::vector<Box> sort_boxes(std::vector<Box> boxes);

// Paints each outline from (x,y) to (x+width, y+height) inclusive, clipped to
// the image; thickness grows inward from the outline.
RgbImage draw_boxes(const RgbImage& img, const std::vector<Box>& boxes, Rgb color = {255, 0, 0},
                    int thickness = 2);

RgbImage gray_to_rgb(const GrayImage& img);

// Crops the box (clipped to the page), scales the longer side to 20 with
// area-average resampling, and centers the result on a 28x28 zero canvas.
// The page must hold values in [0,1] with ink bright.
Glyph28 extract_glyph(const FloatImage& page, const Box& box);

struct SegmentConfig {
    MeanShiftParams mean_shift;
    int median_kernel = 3;
    CannyParams canny;
    int min_area = 9;
};

struct PageSegmentation {
    GrayImage meanshift;
    GrayImage median;
    GrayImage normalized;
    BinaryImage edges;
    std::vector<Box> naive_boxes; // every component box, before dedup
    std::vector<Box> boxes;       // deduplicated, reading order
    std::vector<Glyph28> glyphs;  // parallel to boxes
};

// Full page chain: mean shift, median blur, min-max normalize, Canny,
// component boxes, containment dedup, reading-order sort, glyph extraction.
PageSegmentation segment_page(const GrayImage& page, const SegmentConfig& cfg = {});

} // namespace ocr
