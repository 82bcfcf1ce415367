#pragma once

#include <string>

#include "core/raster.hpp"

namespace chroma {

/// Portable float map, "PF" color variant, 32-bit little-endian payload
/// (scale header -1.0), rows stored bottom-to-top. Round trips bit-exactly.
RasterImage read_pfm(const std::string& path);
void write_pfm(const RasterImage& img, const std::string& path);

/// 8-bit RGB PNG; bytes map to v/255. Other bit depths are rejected.
RasterImage read_ldr(const std::string& path);
void write_ldr(const RasterImage& img, const std::string& path);

/// Cheap header validation used by manifest loading.
bool looks_like_pfm(const std::string& path);
bool looks_like_png(const std::string& path);

struct TonemapResult {
    RasterImage ldr;
    double exposure;
};

/// Re-expose so the median per-pixel channel mean hits `target_median`,
/// clip to 1, then apply the 1/gamma power. Returns the exposure factor so
/// it can be re-applied elsewhere.
TonemapResult tonemap_ldr(const RasterImage& hdr, double target_median = 0.45,
                          double gamma = 2.2);

/// Same clipping and gamma with a caller-supplied exposure factor.
RasterImage tonemap_with_exposure(const RasterImage& hdr, double exposure,
                                  double gamma = 2.2);

/// Per-channel x^gamma; maps display-encoded values back to linear radiance.
RasterImage inverse_tonemap(const RasterImage& ldr, double gamma = 2.2);

} // namespace chroma
