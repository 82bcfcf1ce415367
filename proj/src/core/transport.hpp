#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/pano.hpp"
#include "core/raster.hpp"

namespace chroma {

/// Lambertian evaluation scene: a ground plane at z = 0 carrying a 3x3 grid
/// of diffuse spheres, observed by a downward-facing orthographic camera.
struct SceneConfig {
    double sphere_radius = 0.5;
    double grid_spacing = 1.5;
    double plane_half_extent = 5.0;
    double camera_half_extent = 2.5;
    double camera_height = 10.0;
    double plane_albedo = 0.8;
    double sphere_albedo = 0.8;
    int render_size = 64;
    int env_width = 128;
    int env_height = 64;

    void validate() const;
    std::uint64_t hash() const;

    std::string to_json() const;
    static SceneConfig from_json(const std::string& text);
    static SceneConfig from_json_file(const std::string& path);
};

/// Dense map from environment pixels to rendered pixels; entries are
/// (albedo/pi) * max(0, n.w) * V * dw, shared across color channels.
struct TransportMatrix {
    int render_size = 0;
    int env_width = 0;
    int env_height = 0;
    std::uint64_t cfg_hash = 0;
    std::vector<float> entries;   // rows() * cols(), row-major
    std::vector<double> row_sums; // derived from entries

    std::size_t rows() const { return static_cast<std::size_t>(render_size) * render_size; }
    std::size_t cols() const {
        return static_cast<std::size_t>(env_width) * env_height;
    }

    void rebuild_row_sums();
};

TransportMatrix build_transport(const SceneConfig& cfg);

void save_transport(const TransportMatrix& t, const std::string& path);
TransportMatrix load_transport(const std::string& path);

/// Loads `cache_path` when it exists and matches cfg's hash; otherwise
/// builds and writes it. `cache_hit` reports which happened.
TransportMatrix load_or_build(const SceneConfig& cfg, const std::string& cache_path,
                              bool* cache_hit = nullptr);

/// Per-channel matrix-vector product in double precision; layout is
/// rows() x 3, row-major. Uniform environments use a row-sum fast path.
std::vector<double> render_raw(const TransportMatrix& t, const Panorama& env);

RasterImage render(const TransportMatrix& t, const Panorama& env);

/// Mean absolute difference over render pixels x channels of TL vs TL*.
double render_loss(const TransportMatrix& t, const Panorama& l, const Panorama& l_star);

} // namespace chroma
