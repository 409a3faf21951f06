#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace ocr {

/// Seeded generator with portable derived draws. mt19937_64 output is
/// fully specified by the standard; the bounded/real draws below avoid
/// std::uniform_*_distribution, whose mapping is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, n), n >= 1. Rejection sampling, no modulo bias.
    std::size_t index(std::size_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return static_cast<std::size_t>(v % n);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double real01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double real(double lo, double hi) { return lo + (hi - lo) * real01(); }

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace ocr
