#pragma once

#include <memory>
#include <string>

#include "core/pano.hpp"
#include "core/raster.hpp"

namespace chroma {

/// A lighting estimator maps a square display-encoded crop to an HDR
/// equirectangular panorama at the estimator's declared resolution.
class Estimator {
public:
    virtual ~Estimator() = default;
    virtual Panorama estimate(const RasterImage& ldr_crop) const = 0;
    virtual std::string describe() const = 0;
};

/// Returns a registered ground-truth panorama, ignoring the crop.
std::unique_ptr<Estimator> make_oracle(Panorama ground_truth);

/// Fits the linear map from a stored neutral reference crop to the input
/// and applies it to the stored neutral ground truth, so
/// estimate(M * ref) == M * gt for rank-3 references.
std::unique_ptr<Estimator> make_equivariant_oracle(RasterImage reference_crop,
                                                   Panorama neutral_ground_truth);

/// Uniform panorama holding the mean of the inverse-tonemapped crop.
std::unique_ptr<Estimator> make_constant_ambient(int out_width = 128, int out_height = 64);

/// Constant-ambient estimate of the gray-world-balanced input, re-tinted by
/// (3 * mean chromaticity)^(1 + beta). beta = 0 is color-faithful; larger
/// values overshoot the input tint.
std::unique_ptr<Estimator> make_tint_blind(double beta, int out_width = 128,
                                           int out_height = 64);

/// Runs `command --input <crop.png> --output <pano.pfm>` in a scratch
/// directory ({input}/{output} placeholders are substituted when present).
std::unique_ptr<Estimator> make_external_estimator(std::string command_template);

struct EstimatorSpec {
    enum class Kind { oracle, equivariant_oracle, constant_ambient, tint_blind, external };
    Kind kind = Kind::oracle;
    double beta = 1.0;
    std::string command;
    int out_width = 128;
    int out_height = 64;

    /// Accepts "oracle", "ambient", "tintblind:beta=<v>", "external:<CMD>".
    static EstimatorSpec parse(const std::string& text);
};

} // namespace chroma
