#include "ocr/pnm.hpp"

#include "ocr/errors.hpp"

#include <cmath>
#include <string>

namespace ocr {
namespace {

[[noreturn]] void fail(const std::string& what, std::size_t offset) {
    throw format_error(what + " at byte offset " + std::to_string(offset));
}

bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Skips whitespace and '#' comments, leaving pos on the next token byte.
void skip_separators(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        if (is_space(bytes[pos])) {
            ++pos;
        } else if (bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n')
                ++pos;
        } else {
            return;
        }
    }
}

std::uint32_t parse_uint(std::span<const std::uint8_t> bytes, std::size_t& pos,
                         const char* field) {
    skip_separators(bytes, pos);
    if (pos >= bytes.size())
        fail(std::string("missing ") + field, pos);
    if (bytes[pos] < '0' || bytes[pos] > '9')
        fail(std::string("expected digit in ") + field, pos);
    std::uint64_t value = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
        value = value * 10 + (bytes[pos] - '0');
        if (value > 0x7fffffffu)
            fail(std::string(field) + " out of range", pos);
        ++pos;
    }
    return static_cast<std::uint32_t>(value);
}

void append_header(std::vector<std::uint8_t>& out, const char* magic, int w, int h) {
    std::string header =
        std::string(magic) + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    out.insert(out.end(), header.begin(), header.end());
}

} // namespace

PnmImage load_pnm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P')
        fail("bad PNM magic", 0);
    const bool color = bytes[1] == '6';
    if (!color && bytes[1] != '5')
        fail("unsupported PNM magic (want P5 or P6)", 1);

    std::size_t pos = 2;
    const std::uint32_t width = parse_uint(bytes, pos, "width");
    const std::uint32_t height = parse_uint(bytes, pos, "height");
    const std::size_t maxval_pos = pos;
    const std::uint32_t maxval = parse_uint(bytes, pos, "maxval");
    if (width == 0)
        fail("zero width", maxval_pos);
    if (height == 0)
        fail("zero height", maxval_pos);
    if (maxval == 0 || maxval > 255)
        fail("maxval " + std::to_string(maxval) + " unsupported (want 1..255)", maxval_pos);
    if (pos >= bytes.size() || !is_space(bytes[pos]))
        fail("expected single whitespace after maxval", pos);
    ++pos;

    const std::size_t count = std::size_t(width) * height * (color ? 3 : 1);
    if (bytes.size() - pos < count)
        fail("raster truncated (need " + std::to_string(count) + " bytes, have " +
                 std::to_string(bytes.size() - pos) + ")",
             bytes.size());

    if (color) {
        std::vector<Rgb> pixels(std::size_t(width) * height);
        for (std::size_t i = 0; i < pixels.size(); ++i)
            pixels[i] = {bytes[pos + 3 * i], bytes[pos + 3 * i + 1], bytes[pos + 3 * i + 2]};
        return RgbImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
    }
    std::vector<std::uint8_t> pixels(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                     bytes.begin() + static_cast<std::ptrdiff_t>(pos + count));
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

std::vector<std::uint8_t> save_pnm(const GrayImage& img) {
    std::vector<std::uint8_t> out;
    out.reserve(img.pixels().size() + 32);
    append_header(out, "P5", img.width(), img.height());
    out.insert(out.end(), img.pixels().begin(), img.pixels().end());
    return out;
}

std::vector<std::uint8_t> save_pnm(const RgbImage& img) {
    std::vector<std::uint8_t> out;
    out.reserve(img.pixels().size() * 3 + 32);
    append_header(out, "P6", img.width(), img.height());
    for (const Rgb& p : img.pixels()) {
        out.push_back(p.r);
        out.push_back(p.g);
        out.push_back(p.b);
    }
    return out;
}

std::vector<std::uint8_t> save_pnm(const BinaryImage& img) {
    std::vector<std::uint8_t> out;
    out.reserve(img.pixels().size() + 32);
    append_header(out, "P5", img.width(), img.height());
    for (std::uint8_t p : img.pixels())
        out.push_back(p ? 255 : 0);
    return out;
}

GrayImage rgb_to_gray(const RgbImage& img) {
    std::vector<std::uint8_t> pixels(img.pixels().size());
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const Rgb& p = img.pixels()[i];
        const double y = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
        pixels[i] = static_cast<std::uint8_t>(std::lround(y));
    }
    return GrayImage(img.width(), img.height(), std::move(pixels));
}

} // namespace ocr
