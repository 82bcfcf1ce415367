#include "core/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace chroma {

namespace {

bool is_pfm_space(int c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF && is_pfm_space(c)) {
    }
    if (c == EOF)
        return tok;
    tok.push_back(static_cast<char>(c));
    while ((c = in.get()) != EOF && !is_pfm_space(c))
        tok.push_back(static_cast<char>(c));
    if (c != EOF)
        in.unget();
    return tok;
}

} // namespace

RasterImage read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(Errc::io, "read_pfm: cannot open " + path);

    std::string magic = next_token(in);
    if (magic == "Pf")
        fail(Errc::parse, "read_pfm: grayscale PFM not supported: " + path);
    if (magic != "PF")
        fail(Errc::parse, "read_pfm: bad magic '" + magic + "' in " + path);

    std::string ws = next_token(in);
    std::string hs = next_token(in);
    std::string ss = next_token(in);
    int w = 0, h = 0;
    double scale = 0.0;
    try {
        w = std::stoi(ws);
        h = std::stoi(hs);
        scale = std::stod(ss);
    } catch (const std::exception&) {
        fail(Errc::parse, "read_pfm: malformed header in " + path);
    }
    if (w <= 0 || h <= 0 || scale == 0.0)
        fail(Errc::parse, "read_pfm: malformed header in " + path);
    if (scale > 0.0)
        fail(Errc::parse, "read_pfm: big-endian payload not supported (scale " + ss + ")");

    int sep = in.get(); // exactly one whitespace byte before the payload
    if (sep == EOF || !is_pfm_space(sep))
        fail(Errc::parse, "read_pfm: missing header terminator in " + path);

    RasterImage img(w, h, Encoding::linear);
    const std::size_t row_floats = static_cast<std::size_t>(w) * 3;
    const std::size_t row_bytes = row_floats * sizeof(float);
    std::vector<float> row(row_floats);
    const float mag = static_cast<float>(-scale);
    // PFM rows are stored bottom-to-top.
    for (int r = h - 1; r >= 0; --r) {
        in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row_bytes));
        if (static_cast<std::size_t>(in.gcount()) != row_bytes)
            fail(Errc::parse, "read_pfm: truncated payload in " + path);
        double* dst = img.px(r, 0);
        for (std::size_t i = 0; i < row_floats; ++i)
            dst[i] = (mag == 1.0f) ? row[i] : row[i] * mag;
    }
    return img;
}

void write_pfm(const RasterImage& img, const std::string& path) {
    if (img.encoding != Encoding::linear)
        fail(Errc::invalid_argument, "write_pfm: image must be linear HDR");
    for (double v : img.pixels)
        if (!(v >= 0.0) || !std::isfinite(static_cast<float>(v)))
            fail(Errc::invalid_argument, "write_pfm: pixels must be finite and >= 0");

    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(Errc::io, "write_pfm: cannot open " + path);
    out << "PF\n" << img.width << " " << img.height << "\n-1.0\n";
    const std::size_t row_floats = static_cast<std::size_t>(img.width) * 3;
    std::vector<float> row(row_floats);
    for (int r = img.height - 1; r >= 0; --r) {
        const double* src = img.px(r, 0);
        for (std::size_t i = 0; i < row_floats; ++i)
            row[i] = static_cast<float>(src[i]);
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row_floats * sizeof(float)));
    }
    if (!out)
        fail(Errc::io, "write_pfm: write failed for " + path);
}

bool looks_like_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    char buf[2] = {0, 0};
    in.read(buf, 2);
    return in.gcount() == 2 && buf[0] == 'P' && buf[1] == 'F';
}

bool looks_like_png(const std::string& path) {
    static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    std::ifstream in(path, std::ios::binary);
    unsigned char buf[8] = {};
    in.read(reinterpret_cast<char*>(buf), 8);
    return in.gcount() == 8 && std::memcmp(buf, sig, 8) == 0;
}

namespace {

struct FileCloser {
    std::FILE* fp;
    ~FileCloser() {
        if (fp)
            std::fclose(fp);
    }
};

} // namespace

RasterImage read_ldr(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp)
        fail(Errc::io, "read_ldr: cannot open " + path);
    FileCloser closer{fp};

    unsigned char header[8];
    if (std::fread(header, 1, 8, fp) != 8 || png_sig_cmp(header, 0, 8))
        fail(Errc::parse, "read_ldr: not a PNG file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(Errc::io, "read_ldr: libpng init failed");
    }

    std::vector<png_bytep> row_ptrs;
    std::vector<unsigned char> data;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(Errc::parse, "read_ldr: PNG decode error in " + path);
    }

    png_init_io(png, fp);
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (bit_depth != 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(Errc::parse,
             "read_ldr: unsupported bit depth " + std::to_string(bit_depth) + " in " + path);
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    if (color_type & PNG_COLOR_MASK_ALPHA)
        png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    const std::size_t row_bytes = png_get_rowbytes(png, info);
    data.resize(row_bytes * h);
    row_ptrs.resize(h);
    for (int r = 0; r < h; ++r)
        row_ptrs[r] = data.data() + row_bytes * r;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    RasterImage img(w, h, Encoding::display);
    for (int r = 0; r < h; ++r) {
        const unsigned char* src = data.data() + row_bytes * r;
        double* dst = img.px(r, 0);
        for (int i = 0; i < w * 3; ++i)
            dst[i] = static_cast<double>(src[i]) / 255.0;
    }
    return img;
}

void write_ldr(const RasterImage& img, const std::string& path) {
    if (img.encoding != Encoding::display)
        fail(Errc::invalid_argument, "write_ldr: image must be display-encoded");

    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp)
        fail(Errc::io, "write_ldr: cannot open " + path);
    FileCloser closer{fp};

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        fail(Errc::io, "write_ldr: libpng init failed");
    }

    std::vector<unsigned char> data(static_cast<std::size_t>(img.width) * img.height * 3);
    std::vector<png_bytep> row_ptrs(img.height);
    for (int r = 0; r < img.height; ++r) {
        unsigned char* dst = data.data() + static_cast<std::size_t>(r) * img.width * 3;
        const double* src = img.px(r, 0);
        for (int i = 0; i < img.width * 3; ++i) {
            double q = std::lround(src[i] * 255.0);
            dst[i] = static_cast<unsigned char>(std::min(255.0, std::max(0.0, q)));
        }
        row_ptrs[r] = dst;
    }

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(Errc::io, "write_ldr: PNG encode error for " + path);
    }

    png_init_io(png, fp);
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

TonemapResult tonemap_ldr(const RasterImage& hdr, double target_median, double gamma) {
    if (hdr.encoding != Encoding::linear)
        fail(Errc::invalid_argument, "tonemap_ldr: input must be linear HDR");
    double med = median_of(intensity(hdr));
    if (med <= 0.0)
        fail(Errc::degenerate_input, "tonemap_ldr: median intensity is zero");
    double exposure = target_median / med;
    return TonemapResult{tonemap_with_exposure(hdr, exposure, gamma), exposure};
}

RasterImage tonemap_with_exposure(const RasterImage& hdr, double exposure, double gamma) {
    RasterImage out(hdr.width, hdr.height, Encoding::display);
    const double inv_gamma = 1.0 / gamma;
    for (std::size_t i = 0; i < hdr.pixels.size(); ++i) {
        double v = std::min(1.0, std::max(0.0, exposure * hdr.pixels[i]));
        out.pixels[i] = std::pow(v, inv_gamma);
    }
    return out;
}

RasterImage inverse_tonemap(const RasterImage& ldr, double gamma) {
    RasterImage out(ldr.width, ldr.height, Encoding::linear);
    for (std::size_t i = 0; i < ldr.pixels.size(); ++i) {
        double v = ldr.pixels[i];
        if (v < 0.0 || v > 1.0)
            fail(Errc::invalid_argument, "inverse_tonemap: values must lie in [0, 1]");
        out.pixels[i] = std::pow(v, gamma);
    }
    return out;
}

} // namespace chroma
