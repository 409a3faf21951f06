#pragma once

#include "ocr/image.hpp"

#include <vector>

namespace ocr {

struct NormalizationParams {
    double new_min = 0.0;
    double new_max = 1.0;
};

struct MeanShiftParams {
    int spatial_radius = 21;
    double color_radius = 111.0;
    int max_iterations = 5;
    double convergence_eps = 1.0;
};

struct CannyParams {
    double low_threshold = 50.0;
    double high_threshold = 150.0;
    double gaussian_sigma = 1.4;
    int gaussian_kernel_size = 5;
};

// Stage outputs captured during canny(), each width*height row-major.
struct CannyDebug {
    std::vector<double> smoothed;
    std::vector<double> magnitude;
    std::vector<double> suppressed; // 0 where NMS dropped the pixel
};

// Rescales to [new_min, new_max] from the image's own global range.
// A constant image maps to all new_min.
FloatImage minmax_normalize(const GrayImage& img, const NormalizationParams& p = {});
FloatImage minmax_normalize(const FloatImage& img, const NormalizationParams& p = {});

// Intensity-domain mean shift: per pixel, the value chases the mean of the
// spatial window restricted to intensities within color_radius of it.
GrayImage mean_shift_filter(const GrayImage& img, const MeanShiftParams& p = {});

// kernel x kernel median with edge replication; kernel must be odd and >= 3.
GrayImage median_blur(const GrayImage& img, int kernel);

// Ink is foreground: 1 where input < t.
BinaryImage threshold_binary(const GrayImage& img, double t);
BinaryImage threshold_binary(const FloatImage& img, double t);

// Gaussian smooth, Sobel, L2 magnitude, 4-direction NMS, hysteresis (8-conn).
BinaryImage canny(const GrayImage& img, const CannyParams& p = {});
BinaryImage canny(const GrayImage& img, const CannyParams& p, CannyDebug* debug);

} // namespace ocr
