#include "core/transport.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace chroma {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr char kMagic[4] = {'C', 'H', 'L', 'T'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string canonical(const SceneConfig& c) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "sphere_radius=%.17g;grid_spacing=%.17g;plane_half_extent=%.17g;"
                  "camera_half_extent=%.17g;camera_height=%.17g;plane_albedo=%.17g;"
                  "sphere_albedo=%.17g;render_size=%d;env_width=%d;env_height=%d",
                  c.sphere_radius, c.grid_spacing, c.plane_half_extent, c.camera_half_extent,
                  c.camera_height, c.plane_albedo, c.sphere_albedo, c.render_size, c.env_width,
                  c.env_height);
    return buf;
}

} // namespace

void SceneConfig::validate() const {
    if (sphere_radius <= 0 || grid_spacing <= 0 || plane_half_extent <= 0 ||
        camera_half_extent <= 0)
        fail(Errc::invalid_argument, "scene config: lengths must be positive");
    if (camera_height <= 2.0 * sphere_radius)
        fail(Errc::invalid_argument, "scene config: camera must sit above the spheres");
    if (!(plane_albedo > 0 && plane_albedo <= 1) || !(sphere_albedo > 0 && sphere_albedo <= 1))
        fail(Errc::invalid_argument, "scene config: albedos must lie in (0, 1]");
    if (render_size < 2 || env_width < 2 || env_height < 1)
        fail(Errc::invalid_argument, "scene config: bad raster sizes");
    // camera footprint must cover all nine spheres
    if (camera_half_extent < grid_spacing + sphere_radius)
        fail(Errc::invalid_argument, "scene config: camera footprint misses outer spheres");
}

std::uint64_t SceneConfig::hash() const { return fnv1a(canonical(*this)); }

std::string SceneConfig::to_json() const {
    nlohmann::json j;
    j["sphere_radius"] = sphere_radius;
    j["grid_spacing"] = grid_spacing;
    j["plane_half_extent"] = plane_half_extent;
    j["camera_half_extent"] = camera_half_extent;
    j["camera_height"] = camera_height;
    j["plane_albedo"] = plane_albedo;
    j["sphere_albedo"] = sphere_albedo;
    j["render_size"] = render_size;
    j["env_width"] = env_width;
    j["env_height"] = env_height;
    return j.dump(2);
}

SceneConfig SceneConfig::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::parse, std::string("scene config: ") + e.what());
    }
    SceneConfig c;
    try {
        c.sphere_radius = j.value("sphere_radius", c.sphere_radius);
        c.grid_spacing = j.value("grid_spacing", c.grid_spacing);
        c.plane_half_extent = j.value("plane_half_extent", c.plane_half_extent);
        c.camera_half_extent = j.value("camera_half_extent", c.camera_half_extent);
        c.camera_height = j.value("camera_height", c.camera_height);
        c.plane_albedo = j.value("plane_albedo", c.plane_albedo);
        c.sphere_albedo = j.value("sphere_albedo", c.sphere_albedo);
        c.render_size = j.value("render_size", c.render_size);
        c.env_width = j.value("env_width", c.env_width);
        c.env_height = j.value("env_height", c.env_height);
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::parse, std::string("scene config: ") + e.what());
    }
    c.validate();
    return c;
}

SceneConfig SceneConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(Errc::io, "scene config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

void TransportMatrix::rebuild_row_sums() {
    row_sums.assign(rows(), 0.0);
    const std::size_t c = cols();
    for (std::size_t r = 0; r < rows(); ++r) {
        double s = 0.0;
        const float* row = entries.data() + r * c;
        for (std::size_t i = 0; i < c; ++i)
            s += row[i];
        row_sums[r] = s;
    }
}

namespace {

struct Hit {
    bool valid = false;
    Vec3 point;
    Vec3 normal;
    double albedo = 0.0;
};

struct Scene {
    std::vector<Vec3> centers;
    double radius;
    double plane_half_extent;
    double plane_albedo;
    double sphere_albedo;

    explicit Scene(const SceneConfig& cfg)
        : radius(cfg.sphere_radius), plane_half_extent(cfg.plane_half_extent),
          plane_albedo(cfg.plane_albedo), sphere_albedo(cfg.sphere_albedo) {
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j)
                centers.push_back({i * cfg.grid_spacing, j * cfg.grid_spacing, cfg.sphere_radius});
    }

    // First hit of the downward orthographic ray at (x, y).
    Hit trace_camera(double x, double y, double camera_height) const {
        Hit hit;
        double best_z = -1.0;
        for (const Vec3& c : centers) {
            double dx = x - c.x, dy = y - c.y;
            double rho2 = dx * dx + dy * dy;
            double disc = radius * radius - rho2;
            if (disc <= 0.0)
                continue;
            double z = c.z + std::sqrt(disc);
            if (z < camera_height && z > best_z) {
                best_z = z;
                hit.valid = true;
                hit.point = {x, y, z};
                hit.normal = {(x - c.x) / radius, (y - c.y) / radius, (z - c.z) / radius};
                hit.albedo = sphere_albedo;
            }
        }
        if (!hit.valid && std::abs(x) <= plane_half_extent && std::abs(y) <= plane_half_extent) {
            hit.valid = true;
            hit.point = {x, y, 0.0};
            hit.normal = {0.0, 0.0, 1.0};
            hit.albedo = plane_albedo;
        }
        return hit;
    }

    // True when the ray from p toward w reaches the environment: w must point
    // above the horizon (the plane is the scene floor) and miss every sphere.
    bool visible(const Vec3& p, const Vec3& w) const {
        if (w.z <= 0.0)
            return false;
        constexpr double eps = 1e-7;
        for (const Vec3& c : centers) {
            Vec3 oc = p - c;
            double b = dot(w, oc);
            double c0 = dot(oc, oc) - radius * radius;
            double disc = b * b - c0;
            if (disc <= 0.0)
                continue;
            if (-b - std::sqrt(disc) > eps)
                return false;
        }
        return true;
    }
};

} // namespace

TransportMatrix build_transport(const SceneConfig& cfg) {
    cfg.validate();
    const Scene scene(cfg);
    const int size = cfg.render_size;
    const int ew = cfg.env_width, eh = cfg.env_height;

    TransportMatrix t;
    t.render_size = size;
    t.env_width = ew;
    t.env_height = eh;
    t.cfg_hash = cfg.hash();
    t.entries.assign(t.rows() * t.cols(), 0.0f);

    std::vector<Vec3> env_dirs(t.cols());
    std::vector<double> env_domega(t.cols());
    const SolidAngleMap sa = solid_angle_map(ew, eh);
    for (int r = 0; r < eh; ++r)
        for (int c = 0; c < ew; ++c) {
            env_dirs[static_cast<std::size_t>(r) * ew + c] = pixel_direction(r, c, ew, eh);
            env_domega[static_cast<std::size_t>(r) * ew + c] = sa.at_row(r);
        }

    const double step = 2.0 * cfg.camera_half_extent / size;
    for (int py = 0; py < size; ++py) {
        double y = cfg.camera_half_extent - (py + 0.5) * step;
        for (int px = 0; px < size; ++px) {
            double x = -cfg.camera_half_extent + (px + 0.5) * step;
            Hit hit = scene.trace_camera(x, y, cfg.camera_height);
            if (!hit.valid)
                continue;
            float* row = t.entries.data() + (static_cast<std::size_t>(py) * size + px) * t.cols();
            const double rho_over_pi = hit.albedo / kPi;
            for (std::size_t i = 0; i < t.cols(); ++i) {
                double cosine = dot(hit.normal, env_dirs[i]);
                if (cosine <= 0.0)
                    continue;
                if (!scene.visible(hit.point, env_dirs[i]))
                    continue;
                row[i] = static_cast<float>(rho_over_pi * cosine * env_domega[i]);
            }
        }
    }
    t.rebuild_row_sums();
    return t;
}

namespace {

template <typename T> void write_raw(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T> void read_raw(std::ifstream& in, T& v, const std::string& path) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (static_cast<std::size_t>(in.gcount()) != sizeof(T))
        fail(Errc::parse, "transport cache: truncated header in " + path);
}

} // namespace

void save_transport(const TransportMatrix& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(Errc::io, "transport cache: cannot open " + path + " for writing");
    out.write(kMagic, 4);
    write_raw(out, kVersion);
    write_raw(out, t.cfg_hash);
    write_raw(out, static_cast<std::uint32_t>(t.render_size));
    write_raw(out, static_cast<std::uint32_t>(t.env_width));
    write_raw(out, static_cast<std::uint32_t>(t.env_height));
    out.write(reinterpret_cast<const char*>(t.entries.data()),
              static_cast<std::streamsize>(t.entries.size() * sizeof(float)));
    if (!out)
        fail(Errc::io, "transport cache: write failed for " + path);
}

TransportMatrix load_transport(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(Errc::io, "transport cache: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0)
        fail(Errc::parse, "transport cache: bad magic in " + path);
    std::uint32_t version = 0;
    read_raw(in, version, path);
    if (version != kVersion)
        fail(Errc::parse, "transport cache: unsupported version in " + path);

    TransportMatrix t;
    std::uint32_t rs = 0, ew = 0, eh = 0;
    read_raw(in, t.cfg_hash, path);
    read_raw(in, rs, path);
    read_raw(in, ew, path);
    read_raw(in, eh, path);
    t.render_size = static_cast<int>(rs);
    t.env_width = static_cast<int>(ew);
    t.env_height = static_cast<int>(eh);
    if (t.render_size < 2 || t.env_width < 2 || t.env_height < 1)
        fail(Errc::parse, "transport cache: bad dimensions in " + path);
    t.entries.resize(t.rows() * t.cols());
    in.read(reinterpret_cast<char*>(t.entries.data()),
            static_cast<std::streamsize>(t.entries.size() * sizeof(float)));
    if (static_cast<std::size_t>(in.gcount()) != t.entries.size() * sizeof(float))
        fail(Errc::parse, "transport cache: truncated payload in " + path);
    t.rebuild_row_sums();
    return t;
}

TransportMatrix load_or_build(const SceneConfig& cfg, const std::string& cache_path,
                              bool* cache_hit) {
    if (cache_hit)
        *cache_hit = false;
    if (std::filesystem::exists(cache_path)) {
        TransportMatrix t = load_transport(cache_path);
        if (t.cfg_hash == cfg.hash() && t.render_size == cfg.render_size &&
            t.env_width == cfg.env_width && t.env_height == cfg.env_height) {
            if (cache_hit)
                *cache_hit = true;
            return t;
        }
    }
    TransportMatrix t = build_transport(cfg);
    save_transport(t, cache_path);
    return t;
}

namespace {

bool uniform_env(const RasterImage& img, double out[3]) {
    if (img.pixel_count() == 0)
        return false;
    out[0] = img.pixels[0];
    out[1] = img.pixels[1];
    out[2] = img.pixels[2];
    for (std::size_t i = 1; i < img.pixel_count(); ++i)
        if (img.pixels[3 * i] != out[0] || img.pixels[3 * i + 1] != out[1] ||
            img.pixels[3 * i + 2] != out[2])
            return false;
    return true;
}

} // namespace

std::vector<double> render_raw(const TransportMatrix& t, const Panorama& env) {
    if (env.width() != t.env_width || env.height() != t.env_height)
        fail(Errc::dimension_mismatch, "render: environment size does not match transport");

    const std::size_t rows = t.rows();
    const std::size_t cols = t.cols();
    std::vector<double> out(rows * 3, 0.0);

    double k[3];
    if (uniform_env(env.img, k)) {
        for (std::size_t r = 0; r < rows; ++r) {
            out[3 * r + 0] = t.row_sums[r] * k[0];
            out[3 * r + 1] = t.row_sums[r] * k[1];
            out[3 * r + 2] = t.row_sums[r] * k[2];
        }
        return out;
    }

    const double* env_px = env.img.pixels.data();
    for (std::size_t r = 0; r < rows; ++r) {
        const float* row = t.entries.data() + r * cols;
        double a0 = 0.0, a1 = 0.0, a2 = 0.0;
        for (std::size_t i = 0; i < cols; ++i) {
            double w = row[i];
            if (w == 0.0)
                continue;
            a0 += w * env_px[3 * i + 0];
            a1 += w * env_px[3 * i + 1];
            a2 += w * env_px[3 * i + 2];
        }
        out[3 * r + 0] = a0;
        out[3 * r + 1] = a1;
        out[3 * r + 2] = a2;
    }
    return out;
}

RasterImage render(const TransportMatrix& t, const Panorama& env) {
    std::vector<double> raw = render_raw(t, env);
    RasterImage img(t.render_size, t.render_size, Encoding::linear);
    img.pixels = std::move(raw);
    return img;
}

double render_loss(const TransportMatrix& t, const Panorama& l, const Panorama& l_star) {
    std::vector<double> a = render_raw(t, l);
    std::vector<double> b = render_raw(t, l_star);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        sum += std::abs(a[i] - b[i]);
    return sum / static_cast<double>(a.size());
}

} // namespace chroma
