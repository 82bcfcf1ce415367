#include "core/pano.hpp"

#include <cmath>
#include <string>

namespace chroma {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
} // namespace

Vec3 normalized(Vec3 v) {
    double n = std::sqrt(dot(v, v));
    return {v.x / n, v.y / n, v.z / n};
}

Panorama::Panorama(RasterImage image) : img(std::move(image)) {
    if (img.width < 2 || img.height < 1)
        fail(Errc::invalid_argument, "panorama must be at least 2x1");
}

double SolidAngleMap::total() const {
    double sum = 0.0;
    for (double w : row_weights)
        sum += w * width;
    return sum;
}

Vec3 pixel_direction(int row, int col, int width, int height) {
    if (row < 0 || row >= height || col < 0 || col >= width)
        fail(Errc::invalid_argument, "pixel_direction: index out of range");
    double theta = kPi * (row + 0.5) / height;
    double phi = kTwoPi * (col + 0.5) / width;
    double st = std::sin(theta);
    return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

SolidAngleMap solid_angle_map(int width, int height) {
    if (width < 2 || height < 1)
        fail(Errc::invalid_argument, "solid_angle_map: need W >= 2, H >= 1");
    SolidAngleMap map;
    map.width = width;
    map.height = height;
    map.row_weights.resize(height);
    const double factor = (kTwoPi / width) * (kPi / height);
    for (int r = 0; r < height; ++r) {
        double theta = kPi * (r + 0.5) / height;
        map.row_weights[r] = factor * std::sin(theta);
    }
    return map;
}

namespace {

Rgb sample_bilinear(const RasterImage& img, double u, double v) {
    // u wraps horizontally; v clamps at the poles.
    int w = img.width, h = img.height;
    double fu = std::floor(u);
    double fv = std::floor(v);
    double du = u - fu;
    double dv = v - fv;
    int c0 = static_cast<int>(fu);
    int r0 = static_cast<int>(fv);
    int c0w = ((c0 % w) + w) % w;
    int c1w = (c0w + 1) % w;
    int r0c = std::min(std::max(r0, 0), h - 1);
    int r1c = std::min(std::max(r0 + 1, 0), h - 1);
    const double* p00 = img.px(r0c, c0w);
    const double* p01 = img.px(r0c, c1w);
    const double* p10 = img.px(r1c, c0w);
    const double* p11 = img.px(r1c, c1w);
    Rgb out;
    for (int ch = 0; ch < 3; ++ch) {
        double top = (1.0 - du) * p00[ch] + du * p01[ch];
        double bot = (1.0 - du) * p10[ch] + du * p11[ch];
        out[ch] = (1.0 - dv) * top + dv * bot;
    }
    return out;
}

Rgb sample_nearest(const RasterImage& img, double u, double v) {
    int w = img.width, h = img.height;
    int c = static_cast<int>(std::lround(u));
    int r = static_cast<int>(std::lround(v));
    c = ((c % w) + w) % w;
    r = std::min(std::max(r, 0), h - 1);
    const double* p = img.px(r, c);
    return {p[0], p[1], p[2]};
}

} // namespace

RasterImage extract_crop(const Panorama& p, double azimuth, double fov, int size,
                         CropFilter filter) {
    if (!(fov > 0.0 && fov < kPi))
        fail(Errc::invalid_argument, "extract_crop: fov must be in (0, pi)");
    if (size < 2)
        fail(Errc::invalid_argument, "extract_crop: size must be >= 2");

    const Vec3 forward{std::cos(azimuth), std::sin(azimuth), 0.0};
    const Vec3 right{std::sin(azimuth), -std::cos(azimuth), 0.0};
    const Vec3 up{0.0, 0.0, 1.0};
    const double half_tan = std::tan(0.5 * fov);
    const int w = p.width(), h = p.height();

    RasterImage out(size, size, p.img.encoding);
    for (int py = 0; py < size; ++py) {
        double sy = (1.0 - 2.0 * (py + 0.5) / size) * half_tan;
        for (int px = 0; px < size; ++px) {
            double sx = (2.0 * (px + 0.5) / size - 1.0) * half_tan;
            Vec3 dir = normalized(forward + sx * right + sy * up);
            double theta = std::acos(std::min(1.0, std::max(-1.0, dir.z)));
            double phi = std::atan2(dir.y, dir.x);
            if (phi < 0.0)
                phi += kTwoPi;
            double u = phi / kTwoPi * w - 0.5;
            double v = theta / kPi * h - 0.5;
            Rgb val = (filter == CropFilter::bilinear) ? sample_bilinear(p.img, u, v)
                                                       : sample_nearest(p.img, u, v);
            out.set_rgb(py, px, val);
        }
    }
    return out;
}

namespace {

struct OverlapTerm {
    int index;
    double weight;
};

// Column overlaps are uniform in azimuth; row overlaps integrate sin(theta).
std::vector<std::vector<OverlapTerm>> column_overlaps(int src_w, int dst_w) {
    std::vector<std::vector<OverlapTerm>> out(dst_w);
    const double ratio = static_cast<double>(src_w) / dst_w;
    for (int c = 0; c < dst_w; ++c) {
        double lo = c * ratio;
        double hi = (c + 1) * ratio;
        for (int s = static_cast<int>(std::floor(lo)); s < hi; ++s) {
            double olo = std::max(lo, static_cast<double>(s));
            double ohi = std::min(hi, static_cast<double>(s + 1));
            if (ohi > olo)
                out[c].push_back({s % src_w, ohi - olo});
        }
    }
    return out;
}

std::vector<std::vector<OverlapTerm>> row_overlaps(int src_h, int dst_h) {
    std::vector<std::vector<OverlapTerm>> out(dst_h);
    const double ratio = static_cast<double>(src_h) / dst_h;
    const double to_theta = kPi / src_h;
    for (int r = 0; r < dst_h; ++r) {
        double lo = r * ratio;
        double hi = (r + 1) * ratio;
        for (int s = static_cast<int>(std::floor(lo)); s < hi && s < src_h; ++s) {
            double olo = std::max(lo, static_cast<double>(s));
            double ohi = std::min(hi, static_cast<double>(s + 1));
            if (ohi > olo) {
                double w = std::cos(olo * to_theta) - std::cos(ohi * to_theta);
                out[r].push_back({s, w});
            }
        }
    }
    return out;
}

} // namespace

Panorama resample_area(const Panorama& p, int new_width, int new_height) {
    if (new_width < 2 || new_height < 1)
        fail(Errc::invalid_argument, "resample_area: bad target size");
    if (new_width == p.width() && new_height == p.height())
        return p;

    auto cols = column_overlaps(p.width(), new_width);
    auto rows = row_overlaps(p.height(), new_height);

    RasterImage out(new_width, new_height, p.img.encoding);
    for (int r = 0; r < new_height; ++r) {
        for (int c = 0; c < new_width; ++c) {
            double acc[3] = {0.0, 0.0, 0.0};
            double wsum = 0.0;
            for (const auto& rt : rows[r]) {
                for (const auto& ct : cols[c]) {
                    double w = rt.weight * ct.weight;
                    const double* px = p.img.px(rt.index, ct.index);
                    acc[0] += w * px[0];
                    acc[1] += w * px[1];
                    acc[2] += w * px[2];
                    wsum += w;
                }
            }
            out.set_rgb(r, c, {acc[0] / wsum, acc[1] / wsum, acc[2] / wsum});
        }
    }
    return Panorama(std::move(out));
}

Panorama rotate_columns(const Panorama& p, int k) {
    const int w = p.width(), h = p.height();
    k = ((k % w) + w) % w;
    RasterImage out(w, h, p.img.encoding);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            const double* src = p.img.px(r, c);
            double* dst = out.px(r, (c + k) % w);
            dst[0] = src[0];
            dst[1] = src[1];
            dst[2] = src[2];
        }
    return Panorama(std::move(out));
}

} // namespace chroma
