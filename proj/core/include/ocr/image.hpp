#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace ocr {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb&) const = default;
};

namespace detail {
struct binary_tag {};
} // namespace detail

/// Row-major pixel grid. Pixel (x, y) with x the column and y the row
/// lives at index y * width + x.
template <typename T, typename Tag = void>
class Image {
public:
    Image() = default;

    Image(int width, int height, T fill = T{})
        : width_(width), height_(height) {
        check_dims(width, height);
        pixels_.assign(static_cast<std::size_t>(width) * height, fill);
    }

    Image(int width, int height, std::vector<T> pixels)
        : width_(width), height_(height), pixels_(std::move(pixels)) {
        check_dims(width, height);
        if (pixels_.size() != static_cast<std::size_t>(width) * height)
            throw std::invalid_argument("pixel count does not match width*height");
        if constexpr (std::is_same_v<Tag, detail::binary_tag>) {
            for (T v : pixels_)
                if (v != 0 && v != 1)
                    throw std::invalid_argument("binary image pixel outside {0,1}");
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }
    bool empty() const { return pixels_.empty(); }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }

    T& at(int x, int y) {
        assert(in_bounds(x, y));
        return pixels_[static_cast<std::size_t>(y) * width_ + x];
    }
    const T& at(int x, int y) const {
        assert(in_bounds(x, y));
        return pixels_[static_cast<std::size_t>(y) * width_ + x];
    }

    std::vector<T>& pixels() { return pixels_; }
    const std::vector<T>& pixels() const { return pixels_; }

    bool operator==(const Image&) const = default;

private:
    static void check_dims(int width, int height) {
        if (width < 1 || height < 1)
            throw std::invalid_argument("image dimensions must be positive");
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> pixels_;
};

using GrayImage = Image<std::uint8_t>;
using FloatImage = Image<double>;
using RgbImage = Image<Rgb>;

/// Pixels restricted to {0, 1}; 1 is foreground (ink or edge).
using BinaryImage = Image<std::uint8_t, detail::binary_tag>;

} // namespace ocr
