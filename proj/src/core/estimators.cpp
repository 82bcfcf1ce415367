#include "core/estimators.hpp"

#include <cmath>
#include <utility>

#include "core/color.hpp"
#include "core/image_io.hpp"
#include "core/process.hpp"
#include "core/strategies.hpp"

namespace chroma {

namespace {

class OracleEstimator final : public Estimator {
public:
    explicit OracleEstimator(Panorama gt) : gt_(std::move(gt)) {}

    Panorama estimate(const RasterImage&) const override { return gt_; }
    std::string describe() const override { return "oracle"; }

private:
    Panorama gt_;
};

class EquivariantOracle final : public Estimator {
public:
    EquivariantOracle(RasterImage ref, Panorama gt)
        : ref_linear_(inverse_tonemap(ref)), gt_(std::move(gt)) {}

    Panorama estimate(const RasterImage& crop) const override {
        RasterImage crop_linear = inverse_tonemap(crop);
        FitResult fit = fit_color_matrix(ref_linear_, crop_linear);
        return Panorama(apply_color_matrix(gt_.img, fit.matrix));
    }
    std::string describe() const override { return "equivariant_oracle"; }

private:
    RasterImage ref_linear_;
    Panorama gt_;
};

class ConstantAmbient final : public Estimator {
public:
    ConstantAmbient(int w, int h) : w_(w), h_(h) {}

    Panorama estimate(const RasterImage& crop) const override {
        Rgb ambient = channel_means(inverse_tonemap(crop));
        return Panorama(RasterImage::filled(w_, h_, ambient, Encoding::linear));
    }
    std::string describe() const override { return "ambient"; }

private:
    int w_, h_;
};

class TintBlind final : public Estimator {
public:
    TintBlind(double beta, int w, int h) : beta_(beta), w_(w), h_(h) {
        if (beta < 0.0)
            fail(Errc::invalid_argument, "tint_blind: beta must be >= 0");
    }

    Panorama estimate(const RasterImage& crop) const override {
        RasterImage linear = inverse_tonemap(crop);
        Rgb mean_chroma = chromaticity(channel_means(linear));
        WhiteBalancer gw;
        gw.kind = BalancerKind::gray_world;
        Rgb ambient = channel_means(white_balance(linear, gw));
        Rgb value;
        for (int c = 0; c < 3; ++c)
            value[c] = ambient[c] * std::pow(3.0 * mean_chroma[c], 1.0 + beta_);
        return Panorama(RasterImage::filled(w_, h_, value, Encoding::linear));
    }
    std::string describe() const override { return "tintblind"; }

private:
    double beta_;
    int w_, h_;
};

class ExternalEstimator final : public Estimator {
public:
    explicit ExternalEstimator(std::string cmd) : command_(std::move(cmd)) {}

    Panorama estimate(const RasterImage& crop) const override {
        TempDir scratch("chromalight-est");
        const std::string in_path = (scratch.path() / "input.png").string();
        const std::string out_path = (scratch.path() / "output.pfm").string();
        write_ldr(crop, in_path);

        const std::string cmd = build_command(command_, in_path, out_path);
        ProcessResult res = run_command(cmd, scratch.path());
        if (res.exit_code != 0)
            fail(Errc::process_failure, "external estimator exited with code " +
                                            std::to_string(res.exit_code) + ": " +
                                            res.stderr_text);
        if (!looks_like_pfm(out_path))
            fail(Errc::process_failure,
                 "external estimator produced no PFM output; stderr: " + res.stderr_text);
        RasterImage pano = read_pfm(out_path);
        for (double v : pano.pixels)
            if (!(v >= 0.0) || !std::isfinite(v))
                fail(Errc::process_failure, "external estimator returned negative or "
                                            "non-finite radiance");
        return Panorama(std::move(pano));
    }
    std::string describe() const override { return "external:" + command_; }

private:
    std::string command_;
};

} // namespace

std::unique_ptr<Estimator> make_oracle(Panorama ground_truth) {
    return std::make_unique<OracleEstimator>(std::move(ground_truth));
}

std::unique_ptr<Estimator> make_equivariant_oracle(RasterImage reference_crop,
                                                   Panorama neutral_ground_truth) {
    return std::make_unique<EquivariantOracle>(std::move(reference_crop),
                                               std::move(neutral_ground_truth));
}

std::unique_ptr<Estimator> make_constant_ambient(int out_width, int out_height) {
    return std::make_unique<ConstantAmbient>(out_width, out_height);
}

std::unique_ptr<Estimator> make_tint_blind(double beta, int out_width, int out_height) {
    return std::make_unique<TintBlind>(beta, out_width, out_height);
}

std::unique_ptr<Estimator> make_external_estimator(std::string command_template) {
    return std::make_unique<ExternalEstimator>(std::move(command_template));
}

EstimatorSpec EstimatorSpec::parse(const std::string& text) {
    EstimatorSpec spec;
    if (text == "oracle") {
        spec.kind = Kind::oracle;
    } else if (text == "ambient") {
        spec.kind = Kind::constant_ambient;
    } else if (text == "tintblind" || text.rfind("tintblind:", 0) == 0) {
        spec.kind = Kind::tint_blind;
        if (text.size() > 10) {
            const std::string arg = text.substr(10);
            if (arg.rfind("beta=", 0) != 0)
                fail(Errc::invalid_argument, "estimator spec: expected tintblind:beta=<v>");
            try {
                spec.beta = std::stod(arg.substr(5));
            } catch (const std::exception&) {
                fail(Errc::invalid_argument, "estimator spec: bad beta in '" + text + "'");
            }
        }
        if (spec.beta < 0.0)
            fail(Errc::invalid_argument, "estimator spec: beta must be >= 0");
    } else if (text.rfind("external:", 0) == 0) {
        spec.kind = Kind::external;
        spec.command = text.substr(9);
        if (spec.command.empty())
            fail(Errc::invalid_argument, "estimator spec: external command is empty");
    } else {
        fail(Errc::invalid_argument, "estimator spec: unknown estimator '" + text + "'");
    }
    return spec;
}

} // namespace chroma
