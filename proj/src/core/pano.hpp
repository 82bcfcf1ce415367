#pragma once

#include <vector>

#include "core/raster.hpp"

namespace chroma {

/// Unit direction in world space. +Z is the zenith.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 normalized(Vec3 v);

/// Equirectangular panorama. Row 0 is the zenith, row H-1 the nadir;
/// column 0 is azimuth 0, increasing eastward over [0, 2pi).
struct Panorama {
    RasterImage img;

    Panorama() = default;
    explicit Panorama(RasterImage image);

    int width() const { return img.width; }
    int height() const { return img.height; }
};

/// Per-row solid angles in steradians, broadcast across columns.
struct SolidAngleMap {
    int width = 0;
    int height = 0;
    std::vector<double> row_weights;

    double at_row(int row) const { return row_weights[row]; }
    double total() const;
};

/// Direction of the pixel center: polar angle pi*(row+0.5)/H from +Z,
/// azimuth 2*pi*(col+0.5)/W from +X toward +Y.
Vec3 pixel_direction(int row, int col, int width, int height);

SolidAngleMap solid_angle_map(int width, int height);

enum class CropFilter {
    bilinear,
    nearest,
};

/// Square pinhole view with the optical axis on the equator at `azimuth`,
/// up-vector +Z. Samples wrap horizontally and clamp vertically.
RasterImage extract_crop(const Panorama& p, double azimuth, double fov, int size,
                         CropFilter filter = CropFilter::bilinear);

/// Solid-angle-weighted box resample to a new equirectangular resolution.
/// Returns the input unchanged when the size already matches.
Panorama resample_area(const Panorama& p, int new_width, int new_height);

/// Cyclic shift by whole columns (positive k moves content eastward).
Panorama rotate_columns(const Panorama& p, int k);

} // namespace chroma
