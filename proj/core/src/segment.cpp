#include "ocr/segment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace ocr {

bool box_contains(const Box& a, const Box& b) {
    return a.x <= b.x && a.y <= b.y && a.x + a.width >= b.x + b.width &&
           a.y + a.height >= b.y + b.height;
}

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent;

    std::uint32_t make() {
        parent.push_back(static_cast<std::uint32_t>(parent.size()));
        return parent.back();
    }
    std::uint32_t find(std::uint32_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

std::vector<Component> find_components(const BinaryImage& img, int min_area) {
    if (min_area < 1)
        throw std::invalid_argument("min_area must be >= 1");
    const int w = img.width();
    const int h = img.height();
    constexpr std::uint32_t none = 0xffffffffu;
    std::vector<std::uint32_t> label(std::size_t(w) * h, none);
    UnionFind uf;

    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!img.at(x, y))
                continue;
            std::uint32_t best = none;
            const auto consider = [&](int nx, int ny) {
                if (nx < 0 || ny < 0 || nx >= w || ny >= h)
                    return;
                const std::uint32_t l = label[std::size_t(ny) * w + nx];
                if (l == none)
                    return;
                if (best == none)
                    best = l;
                else
                    uf.unite(best, l);
            };
            consider(x - 1, y);
            consider(x - 1, y - 1);
            consider(x, y - 1);
            consider(x + 1, y - 1);
            label[std::size_t(y) * w + x] = best == none ? uf.make() : best;
        }

    // Second pass: group by root label in first-encounter order.
    std::vector<std::uint32_t> root_slot(uf.parent.size(), none);
    std::vector<Component> comps;
    std::vector<std::array<int, 4>> bounds; // min_x, min_y, max_x, max_y
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            std::uint32_t l = label[std::size_t(y) * w + x];
            if (l == none)
                continue;
            l = uf.find(l);
            if (root_slot[l] == none) {
                root_slot[l] = static_cast<std::uint32_t>(comps.size());
                comps.emplace_back();
                bounds.push_back({x, y, x, y});
            }
            const std::uint32_t s = root_slot[l];
            comps[s].pixels.emplace_back(y, x);
            bounds[s][0] = std::min(bounds[s][0], x);
            bounds[s][1] = std::min(bounds[s][1], y);
            bounds[s][2] = std::max(bounds[s][2], x);
            bounds[s][3] = std::max(bounds[s][3], y);
        }

    for (std::size_t i = 0; i < comps.size(); ++i)
        comps[i].box = {bounds[i][0], bounds[i][1], bounds[i][2] - bounds[i][0] + 1,
                        bounds[i][3] - bounds[i][1] + 1};

    std::erase_if(comps, [&](const Component& c) {
        return c.pixel_count() < static_cast<std::size_t>(min_area);
    });
    return comps;
}

std::vector<Box> dedup_boxes(const std::vector<Box>& boxes) {
    std::vector<Box> distinct;
    for (const Box& b : boxes)
        if (std::find(distinct.begin(), distinct.end(), b) == distinct.end())
            distinct.push_back(b);

    // Area-descending sweep: every container of a box is strictly larger once
    // duplicates are gone, so containers are always examined first.
    std::vector<std::size_t> order(distinct.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::int64_t(distinct[a].width) * distinct[a].height >
               std::int64_t(distinct[b].width) * distinct[b].height;
    });
    std::vector<bool> kept(distinct.size(), true);
    std::vector<std::size_t> kept_order;
    for (std::size_t i : order) {
        bool enclosed = false;
        for (std::size_t j : kept_order)
            if (box_contains(distinct[j], distinct[i])) {
                enclosed = true;
                break;
            }
        if (enclosed)
            kept[i] = false;
        else
            kept_order.push_back(i);
    }

    std::vector<Box> out;
    for (std::size_t i = 0; i < distinct.size(); ++i)
        if (kept[i])
            out.push_back(distinct[i]);
    return out;
}

std::vector<Box> sort_boxes(std::vector<Box> boxes) {
    std::stable_sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) {
        return std::tie(a.x, a.y, a.width, a.height) < std::tie(b.x, b.y, b.width, b.height);
    });
    return boxes;
}

RgbImage draw_boxes(const RgbImage& img, const std::vector<Box>& boxes, Rgb color, int thickness) {
    if (thickness < 1)
        throw std::invalid_argument("thickness must be >= 1");
    RgbImage out = img;
    const auto paint = [&](int x, int y) {
        if (x >= 0 && y >= 0 && x < out.width() && y < out.height())
            out.at(x, y) = color;
    };
    for (const Box& b : boxes)
        for (int k = 0; k < thickness; ++k) {
            const int x0 = b.x + k;
            const int y0 = b.y + k;
            const int x1 = b.x + b.width - k;
            const int y1 = b.y + b.height - k;
            if (x0 > x1 || y0 > y1)
                break;
            for (int x = x0; x <= x1; ++x) {
                paint(x, y0);
                paint(x, y1);
            }
            for (int y = y0 + 1; y < y1; ++y) {
                paint(x0, y);
                paint(x1, y);
            }
        }
    return out;
}

RgbImage gray_to_rgb(const GrayImage& img) {
    std::vector<Rgb> pixels(img.pixels().size());
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const std::uint8_t v = img.pixels()[i];
        pixels[i] = {v, v, v};
    }
    return RgbImage(img.width(), img.height(), std::move(pixels));
}

Glyph28 extract_glyph(const FloatImage& page, const Box& box) {
    const int x0 = std::max(box.x, 0);
    const int y0 = std::max(box.y, 0);
    const int x1 = std::min(box.x + box.width, page.width());
    const int y1 = std::min(box.y + box.height, page.height());
    if (x1 <= x0 || y1 <= y0)
        throw std::invalid_argument("box degenerate after clipping to the page");
    const int sw = x1 - x0;
    const int sh = y1 - y0;

    int tw, th;
    if (sw >= sh) {
        tw = 20;
        th = std::max(1, static_cast<int>(std::lround(20.0 * sh / sw)));
    } else {
        th = 20;
        tw = std::max(1, static_cast<int>(std::lround(20.0 * sw / sh)));
    }

    Glyph28 glyph;
    const int ox = (Glyph28::side - tw) / 2;
    const int oy = (Glyph28::side - th) / 2;
    for (int ty = 0; ty < th; ++ty) {
        const double sy0 = double(ty) * sh / th;
        const double sy1 = double(ty + 1) * sh / th;
        for (int tx = 0; tx < tw; ++tx) {
            const double sx0 = double(tx) * sw / tw;
            const double sx1 = double(tx + 1) * sw / tw;
            double acc = 0.0;
            for (int sy = static_cast<int>(sy0); sy < y1 - y0 && sy < sy1; ++sy) {
                const double wy = std::min(sy1, sy + 1.0) - std::max(sy0, double(sy));
                if (wy <= 0.0)
                    continue;
                for (int sx = static_cast<int>(sx0); sx < x1 - x0 && sx < sx1; ++sx) {
                    const double wx = std::min(sx1, sx + 1.0) - std::max(sx0, double(sx));
                    if (wx <= 0.0)
                        continue;
                    acc += wx * wy * page.at(x0 + sx, y0 + sy);
                }
            }
            const double area = (sx1 - sx0) * (sy1 - sy0);
            glyph.at(ox + tx, oy + ty) = std::clamp(acc / area, 0.0, 1.0);
        }
    }
    return glyph;
}

PageSegmentation segment_page(const GrayImage& page, const SegmentConfig& cfg) {
    GrayImage ms = mean_shift_filter(page, cfg.mean_shift);
    GrayImage med = median_blur(ms, cfg.median_kernel);
    FloatImage norm = minmax_normalize(med, {0.0, 255.0});

    std::vector<std::uint8_t> norm_u8(norm.pixels().size());
    for (std::size_t i = 0; i < norm_u8.size(); ++i)
        norm_u8[i] = static_cast<std::uint8_t>(std::lround(norm.pixels()[i]));
    GrayImage norm_gray(norm.width(), norm.height(), std::move(norm_u8));

    BinaryImage edges = canny(norm_gray, cfg.canny);
    std::vector<Component> comps = find_components(edges, cfg.min_area);

    PageSegmentation seg{std::move(ms),   std::move(med), std::move(norm_gray),
                         std::move(edges), {},             {},
                         {}};
    for (const Component& c : comps)
        seg.naive_boxes.push_back(c.box);
    seg.boxes = sort_boxes(dedup_boxes(seg.naive_boxes));

    // Glyphs come from the normalized page with polarity flipped: ink bright.
    std::vector<double> inverted(norm.pixels().size());
    for (std::size_t i = 0; i < inverted.size(); ++i)
        inverted[i] = 1.0 - norm.pixels()[i] / 255.0;
    FloatImage glyph_src(norm.width(), norm.height(), std::move(inverted));
    seg.glyphs.reserve(seg.boxes.size());
    for (const Box& b : seg.boxes)
        seg.glyphs.push_back(extract_glyph(glyph_src, b));
    return seg;
}

} // namespace ocr
