#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "core/color.hpp"

namespace chroma {

struct TintInfo {
    IlluminantName src;
    IlluminantName dst;
};

struct SettingEntry {
    std::string name;
    std::string pano_path;               // relative to the manifest directory
    std::vector<std::string> crop_paths; // 3 crops
    std::vector<double> crop_exposures;  // parallel to crop_paths; 1.0 if absent
    std::optional<TintInfo> tint;        // synthetic provenance
};

struct SceneEntry {
    std::string scene_id;
    std::string awb_setting_name;
    std::vector<SettingEntry> settings;

    const SettingEntry* find_setting(const std::string& name) const;
};

struct DatasetManifest {
    std::filesystem::path root; // directory holding the manifest file
    double crop_fov_deg = 90.0;
    std::vector<double> crop_azimuths_deg = {0.0, 120.0, 240.0};
    std::string tool = "chromalight";
    std::string version = "0.1.0";
    std::vector<SceneEntry> scenes;

    std::filesystem::path resolve(const std::string& rel) const { return root / rel; }
};

/// Parses and validates a manifest. All schema violations (missing AWB
/// setting, duplicate setting names, dangling or unparseable files) are
/// collected into one validation error.
DatasetManifest load_manifest(const std::string& path);

void save_manifest(const DatasetManifest& manifest, const std::string& path);

struct SynthConfig {
    int n_scenes = 20;
    int tints_per_scene = 8;
    std::uint64_t seed = 1;
    std::string out_dir;
    int pano_width = 256;
    int pano_height = 128;
    int crop_size = 256;
    double crop_fov_deg = 90.0;
};

/// Generates a synthetic multi-white-balance dataset: per scene a procedural
/// neutral HDR panorama (the AWB setting) plus globally tinted variants
/// drawn from Bradford transforms between random standard illuminants, with
/// three tonemapped crops per setting. Deterministic for a given seed.
DatasetManifest synth_generate(const SynthConfig& cfg);

} // namespace chroma
