#include "ocr/synthetic.hpp"

#include "ocr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ocr {
namespace {

double sq(double v) { return v * v; }

// Round-capped stroke: every pixel within r of the segment.
void stroke(Glyph28& g, double x0, double y0, double x1, double y1, double r) {
    const double dx = x1 - x0;
    const double dy = y1 - y0;
    const double len2 = dx * dx + dy * dy;
    for (int y = 0; y < Glyph28::side; ++y)
        for (int x = 0; x < Glyph28::side; ++x) {
            double t = len2 > 0.0 ? ((x - x0) * dx + (y - y0) * dy) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            if (sq(x - (x0 + t * dx)) + sq(y - (y0 + t * dy)) <= r * r)
                g.at(x, y) = 1.0;
        }
}

struct Pt {
    double x, y;
};

void path(Glyph28& g, std::initializer_list<Pt> pts, double r) {
    const Pt* p = pts.begin();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        stroke(g, p[i].x, p[i].y, p[i + 1].x, p[i + 1].y, r);
}

// Elliptical annulus; the inner ellipse becomes an enclosed hole.
void ring(Glyph28& g, double cx, double cy, double rx, double ry, double hole_rx,
          double hole_ry) {
    for (int y = 0; y < Glyph28::side; ++y)
        for (int x = 0; x < Glyph28::side; ++x) {
            const double qo = sq((x - cx) / rx) + sq((y - cy) / ry);
            const double qi = sq((x - cx) / hole_rx) + sq((y - cy) / hole_ry);
            if (qo <= 1.0 && qi >= 1.0)
                g.at(x, y) = 1.0;
        }
}

} // namespace

Glyph28 digit_glyph(int digit) {
    if (digit < 0 || digit > 9)
        throw std::invalid_argument("digit must be 0..9");
    Glyph28 g;
    switch (digit) {
    case 0:
        ring(g, 13.5, 14.0, 8.0, 10.5, 3.8, 6.3);
        break;
    case 1:
        stroke(g, 13.5, 4.2, 13.5, 23.8, 2.7);
        break;
    case 2:
        path(g, {{8.6, 8.2}, {13.4, 4.8}, {18.6, 8.4}, {17.9, 12.4}, {8.4, 22.8}, {20.2, 23.2}},
             2.5);
        break;
    case 3:
        path(g,
             {{8.8, 6.4}, {13.8, 4.6}, {18.2, 8.0}, {13.6, 12.8}, {18.8, 16.4}, {14.2, 23.2},
              {8.6, 21.4}},
             2.5);
        break;
    case 4:
        // The top stays open: the diagonal never reaches the right stem.
        stroke(g, 11.8, 4.8, 7.8, 15.4, 2.4);
        stroke(g, 7.8, 15.4, 20.6, 15.4, 2.4);
        stroke(g, 17.6, 7.6, 17.6, 23.8, 2.5);
        break;
    case 5:
        path(g,
             {{19.2, 5.0}, {9.6, 5.0}, {9.2, 12.2}, {14.4, 11.2}, {19.0, 15.4}, {15.0, 22.8},
              {8.8, 21.2}},
             2.5);
        break;
    case 6:
        stroke(g, 16.8, 4.2, 10.9, 11.8, 2.6);
        ring(g, 13.8, 17.3, 6.2, 6.4, 2.8, 2.9);
        break;
    case 7:
        path(g, {{8.2, 5.2}, {19.6, 5.2}, {12.6, 23.8}}, 2.5);
        break;
    case 8:
        ring(g, 13.5, 9.2, 5.6, 5.4, 2.3, 2.1);
        ring(g, 13.5, 18.4, 6.2, 5.9, 2.7, 2.4);
        break;
    case 9:
        ring(g, 14.2, 10.6, 6.0, 6.2, 2.7, 2.8);
        stroke(g, 19.1, 13.6, 15.9, 23.6, 2.6);
        break;
    }
    return g;
}

SyntheticPage make_synthetic_page(std::span<const Example> digits, const SyntheticParams& p,
                                  std::uint64_t seed) {
    if (digits.empty())
        throw std::invalid_argument("synthetic page needs at least one digit");
    if (p.page_width < 1 || p.page_height < 1 || p.margin < 0 || p.spacing < 0 || p.scale < 1)
        throw std::invalid_argument("invalid synthetic page layout");
    if (!(p.noise_fraction >= 0.0 && p.noise_fraction <= 1.0))
        throw std::invalid_argument("noise_fraction must lie in [0,1]");

    const int cell = Glyph28::side * p.scale;
    const int top = (p.page_height - cell) / 2;
    if (top < 0)
        throw std::invalid_argument("layout overflow: page shorter than a glyph");

    SyntheticPage out{GrayImage(p.page_width, p.page_height, std::uint8_t(255)), {}};
    int cursor = p.margin;
    for (const Example& ex : digits) {
        if (cursor + cell + p.margin > p.page_width)
            throw std::invalid_argument("layout overflow: glyphs exceed the page width");
        int min_x = Glyph28::side, min_y = Glyph28::side, max_x = -1, max_y = -1;
        for (int gy = 0; gy < Glyph28::side; ++gy)
            for (int gx = 0; gx < Glyph28::side; ++gx) {
                const double v = ex.glyph.at(gx, gy);
                if (v <= 0.0)
                    continue;
                min_x = std::min(min_x, gx);
                min_y = std::min(min_y, gy);
                max_x = std::max(max_x, gx);
                max_y = std::max(max_y, gy);
                const std::uint8_t ink =
                    static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - v)));
                for (int sy = 0; sy < p.scale; ++sy)
                    for (int sx = 0; sx < p.scale; ++sx)
                        out.page.at(cursor + gx * p.scale + sx, top + gy * p.scale + sy) = ink;
            }
        if (max_x >= 0)
            out.truth.push_back({ex.label,
                                 {cursor + min_x * p.scale, top + min_y * p.scale,
                                  (max_x - min_x + 1) * p.scale, (max_y - min_y + 1) * p.scale}});
        cursor += cell + p.spacing;
    }

    if (p.margin_lines && p.page_height >= 4) {
        for (int x = 0; x < p.page_width; ++x) {
            out.page.at(x, 1) = 0;
            out.page.at(x, p.page_height - 2) = 0;
        }
    }

    Rng rng(seed);
    const std::size_t total = out.page.pixels().size();
    const std::size_t noisy = static_cast<std::size_t>(
        std::llround(p.noise_fraction * static_cast<double>(total)));
    std::vector<std::uint32_t> order(total);
    std::iota(order.begin(), order.end(), 0u);
    for (std::size_t k = 0; k < noisy; ++k) {
        const std::size_t j = k + rng.index(total - k);
        std::swap(order[k], order[j]);
        out.page.pixels()[order[k]] = rng.next_u64() & 1 ? 255 : 0;
    }
    return out;
}

} // namespace ocr
