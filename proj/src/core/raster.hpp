#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "core/error.hpp"

namespace chroma {

/// Pixel encoding tag. Linear images hold non-negative radiance; display
/// images hold gamma-encoded values in [0, 1].
enum class Encoding {
    linear,
    display,
};

using Rgb = std::array<double, 3>;

/// Row-major H x W x 3 raster. Row 0 is the top of the image. Pixels are
/// kept as doubles in memory; file formats narrow to their own precision.
struct RasterImage {
    int width = 0;
    int height = 0;
    Encoding encoding = Encoding::linear;
    std::vector<double> pixels; // height * width * 3

    RasterImage() = default;
    RasterImage(int w, int h, Encoding enc);

    static RasterImage filled(int w, int h, const Rgb& value,
                              Encoding enc = Encoding::linear);

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }

    double* px(int row, int col) {
        return pixels.data() + 3 * (static_cast<std::size_t>(row) * width + col);
    }
    const double* px(int row, int col) const {
        return pixels.data() + 3 * (static_cast<std::size_t>(row) * width + col);
    }

    Rgb rgb(int row, int col) const {
        const double* p = px(row, col);
        return {p[0], p[1], p[2]};
    }
    void set_rgb(int row, int col, const Rgb& v) {
        double* p = px(row, col);
        p[0] = v[0];
        p[1] = v[1];
        p[2] = v[2];
    }

    bool same_size(const RasterImage& other) const {
        return width == other.width && height == other.height;
    }
};

void require_same_size(const RasterImage& a, const RasterImage& b, const char* what);

/// Per-channel arithmetic means over all pixels.
Rgb channel_means(const RasterImage& img);

/// Mean of the three channels per pixel, flattened row-major.
std::vector<double> intensity(const RasterImage& img);

/// Median of a value list (averages the two middle elements for even sizes).
double median_of(std::vector<double> values);

RasterImage scaled(const RasterImage& img, double factor);

} // namespace chroma
