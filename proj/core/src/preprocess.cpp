#include "ocr/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

namespace ocr {
namespace {

template <typename T>
FloatImage normalize_impl(const Image<T>& img, const NormalizationParams& p) {
    if (!(p.new_min < p.new_max))
        throw std::invalid_argument("normalization range requires new_min < new_max");
    const auto& in = img.pixels();
    double lo = static_cast<double>(in[0]);
    double hi = lo;
    for (T v : in) {
        lo = std::min(lo, static_cast<double>(v));
        hi = std::max(hi, static_cast<double>(v));
    }
    std::vector<double> out(in.size());
    if (lo == hi) {
        std::fill(out.begin(), out.end(), p.new_min);
    } else {
        const double scale = (p.new_max - p.new_min) / (hi - lo);
        for (std::size_t i = 0; i < in.size(); ++i)
            out[i] = (static_cast<double>(in[i]) - lo) * scale + p.new_min;
    }
    return FloatImage(img.width(), img.height(), std::move(out));
}

// Mean of window intensities within [cur - sr, cur + sr], from per-bin prefix
// sums.  The band always holds at least one pixel: the mean of the previous
// band lies within sr of its nearest member.
double band_mean(const std::int64_t* prefix_cnt, const std::int64_t* prefix_sum, double cur,
                 double sr) {
    int lo = static_cast<int>(std::ceil(cur - sr));
    int hi = static_cast<int>(std::floor(cur + sr));
    lo = std::max(lo, 0);
    hi = std::min(hi, 255);
    const std::int64_t cnt = prefix_cnt[hi + 1] - prefix_cnt[lo];
    const std::int64_t sum = prefix_sum[hi + 1] - prefix_sum[lo];
    return static_cast<double>(sum) / static_cast<double>(cnt);
}

} // namespace

FloatImage minmax_normalize(const GrayImage& img, const NormalizationParams& p) {
    return normalize_impl(img, p);
}

FloatImage minmax_normalize(const FloatImage& img, const NormalizationParams& p) {
    return normalize_impl(img, p);
}

GrayImage mean_shift_filter(const GrayImage& img, const MeanShiftParams& p) {
    if (p.spatial_radius < 1 || p.color_radius < 0 || p.max_iterations < 1 ||
        p.convergence_eps < 0)
        throw std::invalid_argument("invalid mean shift parameters");
    const int w = img.width();
    const int h = img.height();
    const int sp = p.spatial_radius;
    std::vector<std::uint8_t> out(img.pixels().size());

    std::int64_t hist[256];
    std::int64_t prefix_cnt[257];
    std::int64_t prefix_sum[257];
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - sp);
        const int y1 = std::min(h - 1, y + sp);
        std::fill(std::begin(hist), std::end(hist), 0);
        for (int yy = y0; yy <= y1; ++yy)
            for (int xx = 0; xx <= std::min(w - 1, sp); ++xx)
                ++hist[img.at(xx, yy)];
        for (int x = 0; x < w; ++x) {
            if (x > 0) {
                const int drop = x - 1 - sp;
                const int add = x + sp;
                for (int yy = y0; yy <= y1; ++yy) {
                    if (drop >= 0)
                        --hist[img.at(drop, yy)];
                    if (add < w)
                        ++hist[img.at(add, yy)];
                }
            }
            prefix_cnt[0] = 0;
            prefix_sum[0] = 0;
            for (int b = 0; b < 256; ++b) {
                prefix_cnt[b + 1] = prefix_cnt[b] + hist[b];
                prefix_sum[b + 1] = prefix_sum[b] + hist[b] * b;
            }
            double cur = img.at(x, y);
            for (int iter = 0; iter < p.max_iterations; ++iter) {
                const double mean = band_mean(prefix_cnt, prefix_sum, cur, p.color_radius);
                const double change = std::abs(mean - cur);
                cur = mean;
                if (change < p.convergence_eps)
                    break;
            }
            out[std::size_t(y) * w + x] =
                static_cast<std::uint8_t>(std::clamp<long>(std::lround(cur), 0, 255));
        }
    }
    return GrayImage(w, h, std::move(out));
}

GrayImage median_blur(const GrayImage& img, int kernel) {
    if (kernel < 3 || kernel % 2 == 0)
        throw std::invalid_argument("median kernel must be odd and >= 3");
    const int w = img.width();
    const int h = img.height();
    const int r = kernel / 2;
    std::vector<std::uint8_t> out(img.pixels().size());
    std::vector<std::uint8_t> window(std::size_t(kernel) * kernel);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::size_t n = 0;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) {
                    const int sx = std::clamp(x + dx, 0, w - 1);
                    const int sy = std::clamp(y + dy, 0, h - 1);
                    window[n++] = img.at(sx, sy);
                }
            auto mid = window.begin() + static_cast<std::ptrdiff_t>(n / 2);
            std::nth_element(window.begin(), mid, window.begin() + static_cast<std::ptrdiff_t>(n));
            out[std::size_t(y) * w + x] = *mid;
        }
    }
    return GrayImage(w, h, std::move(out));
}

namespace {

template <typename T>
BinaryImage threshold_impl(const Image<T>& img, double t) {
    std::vector<std::uint8_t> out(img.pixels().size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<double>(img.pixels()[i]) < t ? 1 : 0;
    return BinaryImage(img.width(), img.height(), std::move(out));
}

std::vector<double> gaussian_smooth(const GrayImage& img, double sigma, int ksize) {
    const int w = img.width();
    const int h = img.height();
    const int r = ksize / 2;
    std::vector<double> kern(static_cast<std::size_t>(ksize));
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        kern[std::size_t(i + r)] = std::exp(-(double(i) * i) / (2.0 * sigma * sigma));
        sum += kern[std::size_t(i + r)];
    }
    for (double& k : kern)
        k /= sum;

    std::vector<double> tmp(std::size_t(w) * h);
    std::vector<double> out(std::size_t(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i)
                acc += kern[std::size_t(i + r)] * img.at(std::clamp(x + i, 0, w - 1), y);
            tmp[std::size_t(y) * w + x] = acc;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i)
                acc += kern[std::size_t(i + r)] * tmp[std::size_t(std::clamp(y + i, 0, h - 1)) * w + x];
            out[std::size_t(y) * w + x] = acc;
        }
    return out;
}

} // namespace

BinaryImage threshold_binary(const GrayImage& img, double t) { return threshold_impl(img, t); }
BinaryImage threshold_binary(const FloatImage& img, double t) { return threshold_impl(img, t); }

BinaryImage canny(const GrayImage& img, const CannyParams& p) { return canny(img, p, nullptr); }

BinaryImage canny(const GrayImage& img, const CannyParams& p, CannyDebug* debug) {
    if (p.low_threshold < 0 || p.low_threshold > p.high_threshold)
        throw std::invalid_argument("canny requires 0 <= low_threshold <= high_threshold");
    if (p.gaussian_kernel_size < 3 || p.gaussian_kernel_size % 2 == 0)
        throw std::invalid_argument("gaussian kernel must be odd and >= 3");
    const int w = img.width();
    const int h = img.height();
    const std::size_t n = std::size_t(w) * h;

    std::vector<double> smooth = gaussian_smooth(img, p.gaussian_sigma, p.gaussian_kernel_size);

    auto sat = [&](int x, int y) {
        return smooth[std::size_t(std::clamp(y, 0, h - 1)) * w + std::clamp(x, 0, w - 1)];
    };
    std::vector<double> mag(n);
    std::vector<double> gxv(n);
    std::vector<double> gyv(n);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double gx = -sat(x - 1, y - 1) + sat(x + 1, y - 1) - 2.0 * sat(x - 1, y) +
                              2.0 * sat(x + 1, y) - sat(x - 1, y + 1) + sat(x + 1, y + 1);
            const double gy = -sat(x - 1, y - 1) - 2.0 * sat(x, y - 1) - sat(x + 1, y - 1) +
                              sat(x - 1, y + 1) + 2.0 * sat(x, y + 1) + sat(x + 1, y + 1);
            const std::size_t i = std::size_t(y) * w + x;
            gxv[i] = gx;
            gyv[i] = gy;
            mag[i] = std::hypot(gx, gy);
        }

    // NMS: keep pixels at least as strong as both neighbors along the
    // gradient direction quantized to 4 bins; out-of-bounds reads as 0.
    auto mag_at = [&](int x, int y) {
        if (x < 0 || y < 0 || x >= w || y >= h)
            return 0.0;
        return mag[std::size_t(y) * w + x];
    };
    std::vector<double> nms(n, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::size_t i = std::size_t(y) * w + x;
            if (mag[i] == 0.0)
                continue;
            double angle = std::atan2(gyv[i], gxv[i]) * 180.0 / 3.14159265358979323846;
            if (angle < 0)
                angle += 180.0;
            double a, b;
            if (angle < 22.5 || angle >= 157.5) {
                a = mag_at(x - 1, y);
                b = mag_at(x + 1, y);
            } else if (angle < 67.5) {
                // y grows downward, so a 45 degree gradient points down-right.
                a = mag_at(x + 1, y + 1);
                b = mag_at(x - 1, y - 1);
            } else if (angle < 112.5) {
                a = mag_at(x, y - 1);
                b = mag_at(x, y + 1);
            } else {
                a = mag_at(x - 1, y + 1);
                b = mag_at(x + 1, y - 1);
            }
            if (mag[i] >= a && mag[i] >= b)
                nms[i] = mag[i];
        }

    // Hysteresis: BFS from strong pixels through 8-connected weak ones.
    // nms > 0 means the pixel survived suppression; suppressed pixels can
    // never become edges even when the thresholds are 0.
    std::vector<std::uint8_t> out(n, 0);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i)
        if (nms[i] > 0.0 && nms[i] >= p.high_threshold) {
            out[i] = 1;
            queue.push_back(i);
        }
    while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        const int x = static_cast<int>(i % std::size_t(w));
        const int y = static_cast<int>(i / std::size_t(w));
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = x + dx;
                const int ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= h)
                    continue;
                const std::size_t j = std::size_t(ny) * w + nx;
                if (!out[j] && nms[j] > 0.0 && nms[j] >= p.low_threshold) {
                    out[j] = 1;
                    queue.push_back(j);
                }
            }
    }

    if (debug) {
        debug->smoothed = std::move(smooth);
        debug->magnitude = std::move(mag);
        debug->suppressed = std::move(nms);
    }
    return BinaryImage(w, h, std::move(out));
}

} // namespace ocr
