#include "core/color.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace chroma {

namespace {

constexpr double kPi = 3.14159265358979323846;

// CIE 1931 2-degree observer chromaticities. "None" stands for the
// no-change augmentation option and carries the D65 white point.
struct XyEntry {
    IlluminantName name;
    double x, y;
};

constexpr XyEntry kWhitePoints[kIlluminantCount] = {
    {IlluminantName::None, 0.31271, 0.32902},
    {IlluminantName::A, 0.44757, 0.40745},
    {IlluminantName::B, 0.34842, 0.35161},
    {IlluminantName::C, 0.31006, 0.31616},
    {IlluminantName::D50, 0.34567, 0.35850},
    {IlluminantName::D55, 0.33242, 0.34743},
    {IlluminantName::D65, 0.31271, 0.32902},
    {IlluminantName::D75, 0.29902, 0.31485},
    {IlluminantName::E, 1.0 / 3.0, 1.0 / 3.0},
    {IlluminantName::F2, 0.37208, 0.37529},
    {IlluminantName::F7, 0.31292, 0.32933},
    {IlluminantName::F11, 0.38052, 0.37713},
};

std::array<double, 3> xy_to_xyz(double x, double y) {
    return {x / y, 1.0, (1.0 - x - y) / y};
}

std::array<Illuminant, kIlluminantCount> build_illuminants() {
    std::array<Illuminant, kIlluminantCount> out{};
    for (int i = 0; i < kIlluminantCount; ++i) {
        const XyEntry& e = kWhitePoints[i];
        out[i] = Illuminant{e.name, e.x, e.y, xy_to_xyz(e.x, e.y)};
    }
    return out;
}

// Bradford sharpened cone response.
const ColorMatrix3 kBradford{{0.8951, 0.2664, -0.1614,   //
                              -0.7502, 1.7135, 0.0367,   //
                              0.0389, -0.0685, 1.0296}};

std::array<double, 3> mat_apply(const ColorMatrix3& m, const std::array<double, 3>& v) {
    return {m.m[0] * v[0] + m.m[1] * v[1] + m.m[2] * v[2],
            m.m[3] * v[0] + m.m[4] * v[1] + m.m[5] * v[2],
            m.m[6] * v[0] + m.m[7] * v[1] + m.m[8] * v[2]};
}

// BT.709 primaries; white point taken from the illuminant table so that
// rgb(1,1,1) maps exactly onto the tabulated D65 white.
ColorMatrix3 derive_rgb_to_xyz() {
    const double px[3] = {0.64, 0.30, 0.15};
    const double py[3] = {0.33, 0.60, 0.06};
    ColorMatrix3 p;
    for (int c = 0; c < 3; ++c) {
        auto col = xy_to_xyz(px[c], py[c]);
        p.at(0, c) = col[0];
        p.at(1, c) = col[1];
        p.at(2, c) = col[2];
    }
    auto scale = mat_apply(p.inverse(), illuminant(IlluminantName::D65).white_xyz);
    ColorMatrix3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            m.at(r, c) = p.at(r, c) * scale[c];
    return m;
}

} // namespace

ColorMatrix3 ColorMatrix3::identity() {
    return ColorMatrix3{{1, 0, 0, 0, 1, 0, 0, 0, 1}};
}

ColorMatrix3 ColorMatrix3::diagonal(double r, double g, double b) {
    return ColorMatrix3{{r, 0, 0, 0, g, 0, 0, 0, b}};
}

Rgb ColorMatrix3::apply(const Rgb& v) const {
    auto r = mat_apply(*this, {v[0], v[1], v[2]});
    return {r[0], r[1], r[2]};
}

ColorMatrix3 ColorMatrix3::operator*(const ColorMatrix3& rhs) const {
    ColorMatrix3 out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                s += at(r, k) * rhs.at(k, c);
            out.at(r, c) = s;
        }
    return out;
}

double ColorMatrix3::determinant() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

ColorMatrix3 ColorMatrix3::inverse() const {
    if (std::abs(determinant()) <= 1e-12)
        fail(Errc::degenerate_fit, "matrix not invertible (|det| <= 1e-12)");
    double a[3][6];
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            a[r][c] = at(r, c);
            a[r][c + 3] = (r == c) ? 1.0 : 0.0;
        }
    }
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col]))
                pivot = r;
        if (pivot != col)
            for (int c = 0; c < 6; ++c)
                std::swap(a[col][c], a[pivot][c]);
        double d = a[col][col];
        for (int c = 0; c < 6; ++c)
            a[col][c] /= d;
        for (int r = 0; r < 3; ++r) {
            if (r == col)
                continue;
            double f = a[r][col];
            if (f == 0.0)
                continue;
            for (int c = 0; c < 6; ++c)
                a[r][c] -= f * a[col][c];
        }
    }
    ColorMatrix3 out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            out.at(r, c) = a[r][c + 3];
    return out;
}

bool ColorMatrix3::is_finite() const {
    for (double v : m)
        if (!std::isfinite(v))
            return false;
    return true;
}

const std::array<Illuminant, kIlluminantCount>& illuminant_set() {
    static const auto table = build_illuminants();
    return table;
}

const Illuminant& illuminant(IlluminantName name) {
    return illuminant_set()[static_cast<int>(name)];
}

const char* illuminant_name(IlluminantName name) {
    static const char* names[kIlluminantCount] = {"None", "A",   "B",   "C",  "D50", "D55",
                                                  "D65",  "D75", "E",   "F2", "F7",  "F11"};
    return names[static_cast<int>(name)];
}

std::optional<IlluminantName> illuminant_from_string(const std::string& s) {
    for (int i = 0; i < kIlluminantCount; ++i)
        if (s == illuminant_name(static_cast<IlluminantName>(i)))
            return static_cast<IlluminantName>(i);
    return std::nullopt;
}

Rgb chromaticity(const Rgb& rgb) {
    for (double v : rgb)
        if (v < 0.0 || !std::isfinite(v))
            fail(Errc::invalid_argument, "chromaticity: components must be finite and >= 0");
    double sum = rgb[0] + rgb[1] + rgb[2];
    if (sum <= 0.0)
        return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return {rgb[0] / sum, rgb[1] / sum, rgb[2] / sum};
}

std::optional<double> rgb_angle_deg(const Rgb& a, const Rgb& b) {
    double na = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    double nb = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
    if (na < 1e-12 || nb < 1e-12)
        return std::nullopt;
    double cosv = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) / (na * nb);
    cosv = std::max(-1.0, std::min(1.0, cosv));
    return std::acos(cosv) * (180.0 / kPi);
}

double rgb_angular_error_deg(const RasterImage& a, const RasterImage& b) {
    require_same_size(a, b, "rgb_angular_error");
    double sum = 0.0;
    std::size_t used = 0;
    const std::size_t n = a.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        Rgb pa{a.pixels[3 * i], a.pixels[3 * i + 1], a.pixels[3 * i + 2]};
        Rgb pb{b.pixels[3 * i], b.pixels[3 * i + 1], b.pixels[3 * i + 2]};
        if (pa[0] < 0 || pa[1] < 0 || pa[2] < 0 || pb[0] < 0 || pb[1] < 0 || pb[2] < 0)
            fail(Errc::invalid_argument, "rgb_angular_error: negative pixel value");
        if (auto deg = rgb_angle_deg(pa, pb)) {
            sum += *deg;
            ++used;
        }
    }
    if (used == 0)
        fail(Errc::undefined_metric, "rgb_angular_error: all pixels skipped (zero vectors)");
    return sum / static_cast<double>(used);
}

const ColorMatrix3& rgb_to_xyz_matrix() {
    static const ColorMatrix3 m = derive_rgb_to_xyz();
    return m;
}

const ColorMatrix3& xyz_to_rgb_matrix() {
    static const ColorMatrix3 m = rgb_to_xyz_matrix().inverse();
    return m;
}

std::array<double, 3> linear_rgb_to_xyz(const Rgb& rgb) {
    return mat_apply(rgb_to_xyz_matrix(), {rgb[0], rgb[1], rgb[2]});
}

Rgb xyz_to_linear_rgb(const std::array<double, 3>& xyz) {
    auto v = mat_apply(xyz_to_rgb_matrix(), xyz);
    return {v[0], v[1], v[2]};
}

LabColor rgb_to_lab(const Rgb& rgb, const Illuminant& white) {
    for (double v : rgb)
        if (v < 0.0)
            fail(Errc::invalid_argument, "rgb_to_lab: components must be >= 0");
    auto xyz = linear_rgb_to_xyz(rgb);
    constexpr double delta = 6.0 / 29.0;
    constexpr double delta3 = delta * delta * delta;
    auto f = [&](double t) {
        return t > delta3 ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
    };
    double fx = f(xyz[0] / white.white_xyz[0]);
    double fy = f(xyz[1] / white.white_xyz[1]);
    double fz = f(xyz[2] / white.white_xyz[2]);
    return LabColor{116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

double delta_e(const LabColor& a, const LabColor& b) {
    double dl = a.L - b.L;
    double da = a.a - b.a;
    double db = a.b - b.b;
    return std::sqrt(dl * dl + da * da + db * db);
}

ColorMatrix3 bradford_adaptation(const Illuminant& src, const Illuminant& dst) {
    static const ColorMatrix3 bradford_inv = kBradford.inverse();
    auto rho_s = mat_apply(kBradford, src.white_xyz);
    auto rho_d = mat_apply(kBradford, dst.white_xyz);
    ColorMatrix3 d = ColorMatrix3::diagonal(rho_d[0] / rho_s[0], rho_d[1] / rho_s[1],
                                            rho_d[2] / rho_s[2]);
    return bradford_inv * (d * kBradford);
}

ColorMatrix3 bradford_adaptation_rgb(const Illuminant& src, const Illuminant& dst) {
    return xyz_to_rgb_matrix() * (bradford_adaptation(src, dst) * rgb_to_xyz_matrix());
}

std::vector<bool> unclipped_mask(const RasterImage& img, double threshold) {
    const std::size_t n = img.pixel_count();
    std::vector<bool> mask(n, true);
    for (std::size_t i = 0; i < n; ++i) {
        if (img.pixels[3 * i] >= threshold || img.pixels[3 * i + 1] >= threshold ||
            img.pixels[3 * i + 2] >= threshold)
            mask[i] = false;
    }
    return mask;
}

FitResult fit_color_matrix(const RasterImage& src, const RasterImage& dst,
                           const std::vector<bool>* mask) {
    require_same_size(src, dst, "fit_color_matrix");
    const std::size_t n = src.pixel_count();

    std::vector<bool> default_mask;
    if (mask == nullptr &&
        (src.encoding == Encoding::display || dst.encoding == Encoding::display)) {
        default_mask = unclipped_mask(src);
        auto dst_mask = unclipped_mask(dst);
        for (std::size_t i = 0; i < n; ++i)
            default_mask[i] = default_mask[i] && dst_mask[i];
        mask = &default_mask;
    }
    if (mask != nullptr && mask->size() != n)
        fail(Errc::dimension_mismatch, "fit_color_matrix: mask size mismatch");

    // Normal equations: a = sum s s^T, b = sum d s^T; solve a M^T = b^T.
    double a[3][3] = {};
    double b[3][3] = {};
    std::size_t used = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (mask != nullptr && !(*mask)[i])
            continue;
        double s[3] = {src.pixels[3 * i], src.pixels[3 * i + 1], src.pixels[3 * i + 2]};
        double d[3] = {dst.pixels[3 * i], dst.pixels[3 * i + 1], dst.pixels[3 * i + 2]};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                a[r][c] += s[r] * s[c];
                b[r][c] += d[r] * s[c];
            }
        ++used;
    }

    // Forward elimination with partial pivoting, shared across the three
    // right-hand sides (columns of b^T, i.e. rows of b).
    double rhs[3][3]; // rhs[k] = column k of the solution workspace
    for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 3; ++k)
            rhs[r][k] = b[k][r]; // b^T
    double scale = 0.0;
    for (int r = 0; r < 3; ++r)
        scale = std::max(scale, std::abs(a[r][r]));
    const double tol = scale * 1e-12;
    int rank = 0;
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col]))
                pivot = r;
        if (std::abs(a[pivot][col]) <= tol)
            continue;
        if (pivot != col) {
            for (int c = 0; c < 3; ++c)
                std::swap(a[col][c], a[pivot][c]);
            for (int k = 0; k < 3; ++k)
                std::swap(rhs[col][k], rhs[pivot][k]);
        }
        ++rank;
        for (int r = col + 1; r < 3; ++r) {
            double f = a[r][col] / a[col][col];
            if (f == 0.0)
                continue;
            for (int c = col; c < 3; ++c)
                a[r][c] -= f * a[col][c];
            for (int k = 0; k < 3; ++k)
                rhs[r][k] -= f * rhs[col][k];
        }
    }
    if (rank < 3 || used < 3) {
        throw DegenerateFitError(rank, "fit_color_matrix: degenerate fit, rank " +
                                           std::to_string(rank) + " from " +
                                           std::to_string(used) + " valid pixels");
    }

    ColorMatrix3 m;
    for (int k = 0; k < 3; ++k) { // solve for row k of M (column k of M^T)
        double x[3];
        for (int r = 2; r >= 0; --r) {
            double s = rhs[r][k];
            for (int c = r + 1; c < 3; ++c)
                s -= a[r][c] * x[c];
            x[r] = s / a[r][r];
        }
        for (int c = 0; c < 3; ++c)
            m.at(k, c) = x[c];
    }

    double sq_sum = 0.0;
    std::size_t used2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (mask != nullptr && !(*mask)[i])
            continue;
        Rgb s{src.pixels[3 * i], src.pixels[3 * i + 1], src.pixels[3 * i + 2]};
        Rgb d{dst.pixels[3 * i], dst.pixels[3 * i + 1], dst.pixels[3 * i + 2]};
        Rgb p = m.apply(s);
        for (int c = 0; c < 3; ++c)
            sq_sum += (p[c] - d[c]) * (p[c] - d[c]);
        ++used2;
    }
    return FitResult{m, std::sqrt(sq_sum / (3.0 * static_cast<double>(used2))), used};
}

namespace {

RasterImage apply_matrix_impl(const RasterImage& img, const ColorMatrix3& m, bool clamp) {
    RasterImage out(img.width, img.height, img.encoding);
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        double s0 = img.pixels[3 * i], s1 = img.pixels[3 * i + 1], s2 = img.pixels[3 * i + 2];
        double r0 = m.m[0] * s0 + m.m[1] * s1 + m.m[2] * s2;
        double r1 = m.m[3] * s0 + m.m[4] * s1 + m.m[5] * s2;
        double r2 = m.m[6] * s0 + m.m[7] * s1 + m.m[8] * s2;
        if (clamp) {
            r0 = std::max(0.0, r0);
            r1 = std::max(0.0, r1);
            r2 = std::max(0.0, r2);
        }
        out.pixels[3 * i] = r0;
        out.pixels[3 * i + 1] = r1;
        out.pixels[3 * i + 2] = r2;
    }
    return out;
}

} // namespace

RasterImage apply_color_matrix(const RasterImage& img, const ColorMatrix3& m) {
    return apply_matrix_impl(img, m, true);
}

RasterImage apply_color_matrix_raw(const RasterImage& img, const ColorMatrix3& m) {
    return apply_matrix_impl(img, m, false);
}

} // namespace chroma
