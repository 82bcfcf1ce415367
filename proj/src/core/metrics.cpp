#include "core/metrics.hpp"

#include <cmath>

namespace chroma {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

} // namespace

double angular_chroma_loss(const Panorama& l, const Panorama& l_star) {
    require_same_size(l.img, l_star.img, "angular_chroma_loss");
    const SolidAngleMap sa = solid_angle_map(l.width(), l.height());
    double sum = 0.0;
    for (int r = 0; r < l.height(); ++r) {
        const double dw = sa.at_row(r);
        for (int c = 0; c < l.width(); ++c) {
            Rgb ca = chromaticity(l.img.rgb(r, c));
            Rgb cb = chromaticity(l_star.img.rgb(r, c));
            double na = std::sqrt(ca[0] * ca[0] + ca[1] * ca[1] + ca[2] * ca[2]);
            double nb = std::sqrt(cb[0] * cb[0] + cb[1] * cb[1] + cb[2] * cb[2]);
            double cosv = (ca[0] * cb[0] + ca[1] * cb[1] + ca[2] * cb[2]) / (na * nb);
            cosv = std::min(1.0, std::max(-1.0, cosv));
            sum += (1.0 - cosv) * dw;
        }
    }
    return sum / (4.0 * kPi);
}

double awb_angular_distance(const RasterImage& img_s, const RasterImage& img_awb) {
    return rgb_angular_error_deg(img_s, img_awb);
}

MetricReport evaluate_pair(const TransportMatrix& t, const Panorama& l,
                           const Panorama& l_star) {
    std::vector<double> est = render_raw(t, l);
    std::vector<double> gt = render_raw(t, l_star);
    return evaluate_with_renders(est, gt, l, l_star);
}

MetricReport evaluate_with_renders(const std::vector<double>& est_render,
                                   const std::vector<double>& gt_render, const Panorama& l,
                                   const Panorama& l_star) {
    if (est_render.size() != gt_render.size() || est_render.size() % 3 != 0)
        fail(Errc::dimension_mismatch, "evaluate: render buffers disagree");
    const std::size_t n = est_render.size() / 3;

    MetricReport rep;
    rep.ang_loss = angular_chroma_loss(l, l_star);

    // Exposure from the ground-truth render (median channel mean -> 0.45).
    std::vector<double> gt_intensity(n);
    for (std::size_t i = 0; i < n; ++i)
        gt_intensity[i] =
            (gt_render[3 * i] + gt_render[3 * i + 1] + gt_render[3 * i + 2]) / 3.0;
    double med = median_of(gt_intensity);
    if (med <= 0.0)
        fail(Errc::degenerate_input, "evaluate: ground-truth render has zero median");
    const double exposure = 0.45 / med;

    const Illuminant& d65 = illuminant(IlluminantName::D65);
    double de_sum = 0.0;
    double l1_sum = 0.0;
    double ang_sum = 0.0;
    std::size_t ang_used = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Rgb e{est_render[3 * i], est_render[3 * i + 1], est_render[3 * i + 2]};
        Rgb g{gt_render[3 * i], gt_render[3 * i + 1], gt_render[3 * i + 2]};

        for (int c = 0; c < 3; ++c)
            l1_sum += std::abs(e[c] - g[c]);

        if (auto deg = rgb_angle_deg(e, g)) {
            ang_sum += *deg;
            ++ang_used;
        }

        Rgb e_tm{clip01(exposure * e[0]), clip01(exposure * e[1]), clip01(exposure * e[2])};
        Rgb g_tm{clip01(exposure * g[0]), clip01(exposure * g[1]), clip01(exposure * g[2])};
        de_sum += delta_e(rgb_to_lab(e_tm, d65), rgb_to_lab(g_tm, d65));
    }
    if (ang_used == 0)
        fail(Errc::undefined_metric, "evaluate: angular metric undefined (all pixels zero)");

    rep.delta_e = de_sum / static_cast<double>(n);
    rep.rgb_angular_deg = ang_sum / static_cast<double>(ang_used);
    rep.render_l1 = l1_sum / static_cast<double>(est_render.size());
    return rep;
}

} // namespace chroma
