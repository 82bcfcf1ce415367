#include "core/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "core/image_io.hpp"
#include "core/process.hpp"

namespace chroma {

namespace {

Rgb balance_gains(const Rgb& channel_stat) {
    for (double v : channel_stat)
        if (v <= 1e-12)
            fail(Errc::degenerate_input, "white_balance: a channel is all black");
    double joint = (channel_stat[0] + channel_stat[1] + channel_stat[2]) / 3.0;
    return {joint / channel_stat[0], joint / channel_stat[1], joint / channel_stat[2]};
}

RasterImage apply_gains(const RasterImage& img, const Rgb& gains) {
    RasterImage out = img;
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        out.pixels[3 * i + 0] = std::max(0.0, out.pixels[3 * i + 0] * gains[0]);
        out.pixels[3 * i + 1] = std::max(0.0, out.pixels[3 * i + 1] * gains[1]);
        out.pixels[3 * i + 2] = std::max(0.0, out.pixels[3 * i + 2] * gains[2]);
    }
    return out;
}

Rgb pnorm_means(const RasterImage& img, double p) {
    double sum[3] = {0.0, 0.0, 0.0};
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c)
            sum[c] += std::pow(img.pixels[3 * i + c], p);
    return {std::pow(sum[0] / n, 1.0 / p), std::pow(sum[1] / n, 1.0 / p),
            std::pow(sum[2] / n, 1.0 / p)};
}

Rgb channel_percentiles(const RasterImage& img, double pct) {
    const std::size_t n = img.pixel_count();
    std::vector<double> vals(n);
    Rgb out;
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < n; ++i)
            vals[i] = img.pixels[3 * i + c];
        std::sort(vals.begin(), vals.end());
        double idx = pct / 100.0 * static_cast<double>(n - 1);
        std::size_t lo = static_cast<std::size_t>(std::floor(idx));
        std::size_t hi = std::min(lo + 1, n - 1);
        double frac = idx - static_cast<double>(lo);
        out[c] = vals[lo] * (1.0 - frac) + vals[hi] * frac;
    }
    return out;
}

RasterImage external_balance(const RasterImage& linear_img, const std::string& command) {
    TempDir scratch("chromalight-wb");
    const std::string in_path = (scratch.path() / "input.png").string();
    const std::string out_path = (scratch.path() / "output.pfm").string();
    write_ldr(encode_display(linear_img), in_path);

    ProcessResult res = run_command(build_command(command, in_path, out_path), scratch.path());
    if (res.exit_code != 0)
        fail(Errc::process_failure, "external balancer exited with code " +
                                        std::to_string(res.exit_code) + ": " + res.stderr_text);
    RasterImage out = read_pfm(out_path);
    if (out.width != linear_img.width || out.height != linear_img.height)
        fail(Errc::process_failure, "external balancer changed the image size");
    for (double& v : out.pixels)
        v = std::max(0.0, v);
    return out;
}

} // namespace

RasterImage encode_display(const RasterImage& linear_img) {
    return tonemap_with_exposure(linear_img, 1.0);
}

RasterImage white_balance(const RasterImage& linear_img, const WhiteBalancer& wb) {
    if (linear_img.encoding != Encoding::linear)
        fail(Errc::invalid_argument, "white_balance: input must be linear radiance");
    switch (wb.kind) {
    case BalancerKind::identity:
        return linear_img;
    case BalancerKind::gray_world:
        return apply_gains(linear_img, balance_gains(channel_means(linear_img)));
    case BalancerKind::shades_of_gray:
        return apply_gains(linear_img, balance_gains(pnorm_means(linear_img, wb.p)));
    case BalancerKind::white_patch:
        return apply_gains(linear_img,
                           balance_gains(channel_percentiles(linear_img, wb.percentile)));
    case BalancerKind::external:
        return external_balance(linear_img, wb.command);
    case BalancerKind::fixed_linear:
        return apply_color_matrix(linear_img, wb.matrix);
    }
    fail(Errc::invalid_argument, "white_balance: unknown balancer kind");
}

WhiteBalancer WhiteBalancer::parse(const std::string& text) {
    WhiteBalancer wb;
    if (text == "identity") {
        wb.kind = BalancerKind::identity;
    } else if (text == "gray_world") {
        wb.kind = BalancerKind::gray_world;
    } else if (text == "shades_of_gray" || text.rfind("shades_of_gray:", 0) == 0) {
        wb.kind = BalancerKind::shades_of_gray;
        if (text.size() > 15) {
            const std::string arg = text.substr(15);
            if (arg.rfind("p=", 0) != 0)
                fail(Errc::invalid_argument, "balancer spec: expected shades_of_gray:p=<v>");
            try {
                wb.p = std::stod(arg.substr(2));
            } catch (const std::exception&) {
                fail(Errc::invalid_argument, "balancer spec: bad p in '" + text + "'");
            }
        }
        if (wb.p < 1.0)
            fail(Errc::invalid_argument, "balancer spec: p must be >= 1");
    } else if (text == "white_patch" || text.rfind("white_patch:", 0) == 0) {
        wb.kind = BalancerKind::white_patch;
        if (text.size() > 12) {
            const std::string arg = text.substr(12);
            if (arg.rfind("pct=", 0) != 0)
                fail(Errc::invalid_argument, "balancer spec: expected white_patch:pct=<v>");
            try {
                wb.percentile = std::stod(arg.substr(4));
            } catch (const std::exception&) {
                fail(Errc::invalid_argument, "balancer spec: bad pct in '" + text + "'");
            }
        }
        if (!(wb.percentile > 0.0 && wb.percentile <= 100.0))
            fail(Errc::invalid_argument, "balancer spec: pct must lie in (0, 100]");
    } else if (text.rfind("external:", 0) == 0) {
        wb.kind = BalancerKind::external;
        wb.command = text.substr(9);
        if (wb.command.empty())
            fail(Errc::invalid_argument, "balancer spec: external command is empty");
    } else {
        fail(Errc::invalid_argument, "balancer spec: unknown balancer '" + text + "'");
    }
    return wb;
}

std::string WhiteBalancer::describe() const {
    switch (kind) {
    case BalancerKind::identity: return "identity";
    case BalancerKind::gray_world: return "gray_world";
    case BalancerKind::shades_of_gray: return "shades_of_gray:p=" + std::to_string(p);
    case BalancerKind::white_patch: return "white_patch:pct=" + std::to_string(percentile);
    case BalancerKind::external: return "external:" + command;
    case BalancerKind::fixed_linear: return "fixed_linear";
    }
    return "?";
}

const char* strategy_name(StrategyId id) {
    switch (id) {
    case StrategyId::baseline: return "baseline";
    case StrategyId::ang_loss: return "angloss";
    case StrategyId::augment: return "augment";
    case StrategyId::wb_test: return "wbtest";
    case StrategyId::wb_train: return "wbtrain";
    }
    return "?";
}

std::optional<StrategyId> strategy_from_string(const std::string& s) {
    for (StrategyId id : {StrategyId::baseline, StrategyId::ang_loss, StrategyId::augment,
                          StrategyId::wb_test, StrategyId::wb_train})
        if (s == strategy_name(id))
            return id;
    return std::nullopt;
}

WbTestResult wb_test_pipeline(const RasterImage& ldr_crop, const WhiteBalancer& wb,
                              const Estimator& est) {
    WbTestResult result;
    if (wb.kind == BalancerKind::identity) {
        // The identity balancer leaves the crop untouched, the fit is exact,
        // and the whole wrap collapses to the plain estimate.
        result.pano = est.estimate(ldr_crop);
        return result;
    }

    RasterImage crop_linear = inverse_tonemap(ldr_crop);
    RasterImage balanced_display;
    try {
        balanced_display = encode_display(white_balance(crop_linear, wb));
    } catch (const Error& e) {
        if (e.code() != Errc::degenerate_input)
            throw;
        result.pano = est.estimate(ldr_crop);
        result.fell_back = true;
        return result;
    }

    Panorama estimated = est.estimate(balanced_display);

    // Correction fit in linear space, over pixels unclipped in both crops.
    RasterImage balanced_linear = inverse_tonemap(balanced_display);
    std::vector<bool> mask = unclipped_mask(ldr_crop);
    std::vector<bool> mask_balanced = unclipped_mask(balanced_display);
    for (std::size_t i = 0; i < mask.size(); ++i)
        mask[i] = mask[i] && mask_balanced[i];

    try {
        FitResult fit = fit_color_matrix(balanced_linear, crop_linear, &mask);
        result.pano = Panorama(apply_color_matrix(estimated.img, fit.matrix));
        result.fit_residual = fit.rms_residual;
        result.correction = fit.matrix;
    } catch (const DegenerateFitError&) {
        result.pano = est.estimate(ldr_crop);
        result.fell_back = true;
    }
    return result;
}

WbTrainPair wb_train_prepare(const RasterImage& ldr_crop, const Panorama& l_star,
                             const WhiteBalancer& wb) {
    if (wb.kind == BalancerKind::identity)
        return WbTrainPair{ldr_crop, l_star, ColorMatrix3::identity()};

    RasterImage crop_linear = inverse_tonemap(ldr_crop);
    RasterImage balanced_display = encode_display(white_balance(crop_linear, wb));
    RasterImage balanced_linear = inverse_tonemap(balanced_display);

    std::vector<bool> mask = unclipped_mask(ldr_crop);
    std::vector<bool> mask_balanced = unclipped_mask(balanced_display);
    for (std::size_t i = 0; i < mask.size(); ++i)
        mask[i] = mask[i] && mask_balanced[i];

    FitResult fit = fit_color_matrix(balanced_linear, crop_linear, &mask);
    ColorMatrix3 inverse = fit.matrix.inverse();
    return WbTrainPair{balanced_display, Panorama(apply_color_matrix(l_star.img, inverse)),
                       fit.matrix};
}

std::pair<Panorama, IlluminantName> augment_illuminant(const Panorama& l_star,
                                                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int idx = static_cast<int>(rng() % static_cast<std::uint64_t>(kIlluminantCount));
    const auto chosen = static_cast<IlluminantName>(idx);
    if (chosen == IlluminantName::None)
        return {l_star, chosen};
    ColorMatrix3 m =
        bradford_adaptation_rgb(illuminant(IlluminantName::D65), illuminant(chosen));
    return {Panorama(apply_color_matrix(l_star.img, m)), chosen};
}

} // namespace chroma
