#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "core/color.hpp"
#include "core/estimators.hpp"
#include "core/pano.hpp"

namespace chroma {

enum class BalancerKind {
    identity,
    gray_world,
    shades_of_gray,
    white_patch,
    external,
    fixed_linear, // applies a caller-supplied matrix; testing hook
};

struct WhiteBalancer {
    BalancerKind kind = BalancerKind::identity;
    double p = 6.0;            // shades_of_gray norm
    double percentile = 95.0;  // white_patch
    std::string command;       // external
    ColorMatrix3 matrix = ColorMatrix3::identity(); // fixed_linear

    /// Accepts "identity", "gray_world", "shades_of_gray:p=<v>",
    /// "white_patch:pct=<v>", "external:<CMD>".
    static WhiteBalancer parse(const std::string& text);
    std::string describe() const;
};

/// Balances a linear-radiance image. Gray-world equalizes channel means to
/// their joint mean; shades-of-gray does the same with p-norm means;
/// white-patch equalizes a per-channel percentile. External balancers follow
/// the estimator process protocol (PNG in, PFM out).
RasterImage white_balance(const RasterImage& linear_img, const WhiteBalancer& wb);

enum class StrategyId { baseline, ang_loss, augment, wb_test, wb_train };

const char* strategy_name(StrategyId id);
std::optional<StrategyId> strategy_from_string(const std::string& s);

struct WbTestResult {
    Panorama pano;
    bool fell_back = false;      // degenerate fit; plain baseline output
    double fit_residual = 0.0;   // rms residual of the correction fit
    ColorMatrix3 correction = ColorMatrix3::identity();
};

/// Test-time white-balance wrap: balance the crop, estimate lighting from
/// the balanced crop, then undo the balancing on the panorama with a
/// least-squares 3x3 correction fitted over unclipped pixels. A degenerate
/// fit falls back to the plain estimate.
WbTestResult wb_test_pipeline(const RasterImage& ldr_crop, const WhiteBalancer& wb,
                              const Estimator& est);

struct WbTrainPair {
    RasterImage crop;       // balanced, display-encoded
    Panorama target;        // ground truth mapped through the inverse transform
    ColorMatrix3 transform; // balanced -> original
};

/// Training-pair preparation: balance the crop and correct the target
/// panorama by the fitted transform's inverse.
WbTrainPair wb_train_prepare(const RasterImage& ldr_crop, const Panorama& l_star,
                             const WhiteBalancer& wb);

/// Chromatic augmentation: adapt the panorama from an assumed D65 source to
/// an illuminant drawn uniformly from the twelve options ("no change" plus
/// the eleven standard illuminants). Deterministic for a given seed.
std::pair<Panorama, IlluminantName> augment_illuminant(const Panorama& l_star,
                                                       std::uint64_t seed);

/// Display-encodes a linear image: clip to [0, 1] and apply the 1/2.2 power.
RasterImage encode_display(const RasterImage& linear_img);

} // namespace chroma
