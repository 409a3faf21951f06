#pragma once

#include <array>
#include <cassert>

namespace ocr {

// One network-ready character: 28x28 reals in [0,1], ink bright.
struct Glyph28 {
    static constexpr int side = 28;
    std::array<double, 784> pixels{};

    double& at(int x, int y) {
        assert(x >= 0 && x < side && y >= 0 && y < side);
        return pixels[std::size_t(y) * side + x];
    }
    double at(int x, int y) const {
        assert(x >= 0 && x < side && y >= 0 && y < side);
        return pixels[std::size_t(y) * side + x];
    }
};

} // namespace ocr
