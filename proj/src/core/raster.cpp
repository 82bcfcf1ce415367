#include "core/raster.hpp"

#include <algorithm>
#include <string>

namespace chroma {

RasterImage::RasterImage(int w, int h, Encoding enc)
    : width(w), height(h), encoding(enc),
      pixels(static_cast<std::size_t>(w) * h * 3, 0.0) {
    if (w < 0 || h < 0)
        fail(Errc::invalid_argument, "raster dimensions must be non-negative");
}

RasterImage RasterImage::filled(int w, int h, const Rgb& value, Encoding enc) {
    RasterImage img(w, h, enc);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        img.pixels[3 * i + 0] = value[0];
        img.pixels[3 * i + 1] = value[1];
        img.pixels[3 * i + 2] = value[2];
    }
    return img;
}

void require_same_size(const RasterImage& a, const RasterImage& b, const char* what) {
    if (!a.same_size(b))
        fail(Errc::dimension_mismatch,
             std::string(what) + ": image sizes differ (" + std::to_string(a.width) + "x" +
                 std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                 std::to_string(b.height) + ")");
}

Rgb channel_means(const RasterImage& img) {
    double sum[3] = {0.0, 0.0, 0.0};
    const std::size_t n = img.pixel_count();
    if (n == 0)
        fail(Errc::invalid_argument, "channel_means: empty image");
    for (std::size_t i = 0; i < n; ++i) {
        sum[0] += img.pixels[3 * i + 0];
        sum[1] += img.pixels[3 * i + 1];
        sum[2] += img.pixels[3 * i + 2];
    }
    return {sum[0] / n, sum[1] / n, sum[2] / n};
}

std::vector<double> intensity(const RasterImage& img) {
    const std::size_t n = img.pixel_count();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (static_cast<double>(img.pixels[3 * i + 0]) + img.pixels[3 * i + 1] +
                  img.pixels[3 * i + 2]) /
                 3.0;
    }
    return out;
}

double median_of(std::vector<double> values) {
    if (values.empty())
        fail(Errc::invalid_argument, "median of empty list");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (values.size() % 2 == 1)
        return hi;
    double lo = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lo + hi);
}

RasterImage scaled(const RasterImage& img, double factor) {
    RasterImage out = img;
    for (double& v : out.pixels)
        v *= factor;
    return out;
}

} // namespace chroma
