#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "core/raster.hpp"

namespace chroma {

/// 3x3 linear color transform, row-major.
struct ColorMatrix3 {
    std::array<double, 9> m{};

    static ColorMatrix3 identity();
    static ColorMatrix3 diagonal(double r, double g, double b);

    double& at(int row, int col) { return m[3 * row + col]; }
    double at(int row, int col) const { return m[3 * row + col]; }

    Rgb apply(const Rgb& v) const;
    ColorMatrix3 operator*(const ColorMatrix3& rhs) const;

    double determinant() const;
    /// Inverse via Gauss-Jordan with partial pivoting; degenerate-fit error
    /// when |det| <= 1e-12.
    ColorMatrix3 inverse() const;

    bool is_finite() const;
};

enum class IlluminantName {
    None, // "no change"; carries the D65 white point
    A,
    B,
    C,
    D50,
    D55,
    D65,
    D75,
    E,
    F2,
    F7,
    F11,
};

struct Illuminant {
    IlluminantName name;
    double white_x;
    double white_y;
    std::array<double, 3> white_xyz; // normalized so Y = 1
};

inline constexpr int kIlluminantCount = 12;

const Illuminant& illuminant(IlluminantName name);
const std::array<Illuminant, kIlluminantCount>& illuminant_set();
const char* illuminant_name(IlluminantName name);
std::optional<IlluminantName> illuminant_from_string(const std::string& s);

struct LabColor {
    double L;
    double a;
    double b;
};

/// RGB divided by its component sum; the zero triple maps to (1/3, 1/3, 1/3).
Rgb chromaticity(const Rgb& rgb);

/// Mean per-pixel angle between RGB vectors, in degrees. Pixels where either
/// norm is below 1e-12 are skipped; an undefined-metric error is raised when
/// every pixel is skipped.
double rgb_angular_error_deg(const RasterImage& a, const RasterImage& b);

/// Per-pixel angle in degrees, or nullopt when either vector is ~zero.
std::optional<double> rgb_angle_deg(const Rgb& a, const Rgb& b);

/// Linear RGB (BT.709 primaries, D65 white) to CIELAB against `white`.
LabColor rgb_to_lab(const Rgb& rgb, const Illuminant& white);

/// CIE76 color difference.
double delta_e(const LabColor& a, const LabColor& b);

std::array<double, 3> linear_rgb_to_xyz(const Rgb& rgb);
Rgb xyz_to_linear_rgb(const std::array<double, 3>& xyz);
const ColorMatrix3& rgb_to_xyz_matrix();
const ColorMatrix3& xyz_to_rgb_matrix();

/// XYZ-space chromatic adaptation matrix mapping src white to dst white
/// (Bradford cone response).
ColorMatrix3 bradford_adaptation(const Illuminant& src, const Illuminant& dst);

/// Same adaptation expressed directly on linear RGB triples.
ColorMatrix3 bradford_adaptation_rgb(const Illuminant& src, const Illuminant& dst);

struct FitResult {
    ColorMatrix3 matrix;
    double rms_residual;
    std::size_t pixels_used;
};

/// Saturation mask: pixels with every channel below `threshold`. Used as the
/// default fit mask for display-encoded inputs.
std::vector<bool> unclipped_mask(const RasterImage& img, double threshold = 0.99);

/// Least-squares M minimizing sum ||M*src_i - dst_i||^2 over valid pixels,
/// via the 3x3 normal equations. When no mask is given, display-encoded
/// inputs exclude pixels with any channel >= 0.99 in src or dst.
/// Degenerate-fit error (message carries the achieved rank) when the valid
/// pixels do not span rank 3.
FitResult fit_color_matrix(const RasterImage& src, const RasterImage& dst,
                           const std::vector<bool>* mask = nullptr);

/// Per-pixel matrix-vector product with negative outputs clamped to zero.
RasterImage apply_color_matrix(const RasterImage& img, const ColorMatrix3& m);

/// Unclamped variant, for residual computations.
RasterImage apply_color_matrix_raw(const RasterImage& img, const ColorMatrix3& m);

} // namespace chroma
