#pragma once

#include "ocr/image.hpp"

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace ocr {

using PnmImage = std::variant<GrayImage, RgbImage>;

// Decodes binary PNM: P5 -> GrayImage, P6 -> RgbImage.  Requires maxval <= 255.
// Throws format_error naming the byte offset of the defect.
PnmImage load_pnm(std::span<const std::uint8_t> bytes);

// Canonical encoding: "P5\n{w} {h}\n255\n" (or P6) followed by the raster.
std::vector<std::uint8_t> save_pnm(const GrayImage& img);
std::vector<std::uint8_t> save_pnm(const RgbImage& img);
// Foreground (1) maps to 255, background to 0.
std::vector<std::uint8_t> save_pnm(const BinaryImage& img);

// ITU-R BT.601 luminance, rounded to nearest.
GrayImage rgb_to_gray(const RgbImage& img);

} // namespace ocr
