#pragma once

#include "core/color.hpp"
#include "core/pano.hpp"
#include "core/transport.hpp"

namespace chroma {

struct MetricReport {
    double delta_e = 0.0;
    double rgb_angular_deg = 0.0;
    double render_l1 = 0.0;
    double ang_loss = 0.0;
};

/// Solid-angle-weighted chromaticity loss:
/// (1/4pi) * sum_i (1 - cos(angle(chroma_i, chroma*_i))) * dw_i.
/// Zero-sum pixels contribute the neutral chromaticity.
double angular_chroma_loss(const Panorama& l, const Panorama& l_star);

/// Mean per-pixel RGB angular difference between two images of the same
/// scene under different white balance settings, in degrees.
double awb_angular_distance(const RasterImage& img_s, const RasterImage& img_awb);

/// Renders both panoramas through the transport and reports all four
/// metrics. Delta E re-exposes both renders by the ground-truth render's
/// exposure factor (median-to-0.45) before the Lab conversion.
MetricReport evaluate_pair(const TransportMatrix& t, const Panorama& l,
                           const Panorama& l_star);

/// Same metrics from precomputed raw renders (rows x 3 doubles), so a
/// cached ground-truth render can be reused across records.
MetricReport evaluate_with_renders(const std::vector<double>& est_render,
                                   const std::vector<double>& gt_render, const Panorama& l,
                                   const Panorama& l_star);

} // namespace chroma
