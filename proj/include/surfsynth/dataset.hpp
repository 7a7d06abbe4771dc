// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "surfsynth/defects.hpp"
#include "surfsynth/masks.hpp"
#include "surfsynth/milling.hpp"
#include "surfsynth/render.hpp"
#include "surfsynth/sandblast.hpp"

namespace surfsynth::dataset {

/// Value sets for the randomized milling parameters. Entries are the
/// multipliers of the parameter table; `*_default` is the index of the
/// nominal value in each set.
struct TextureRandomization {
    std::vector<double> sigma_c_mult{0.01, 0.05, 0.1, 0.2, 0.4, 0.6, 0.8};  // x delta / conf
    std::vector<double> delta_mult{0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 1.0, 1.05, 1.1};  // x delta_unit_mm
    std::vector<double> epsilon{0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
    std::vector<double> sigma_w_minus_mult{0.015, 0.02, 0.025, 0.03, 0.035};  // x 1 / conf
    std::vector<double> sigma_lh_minus_mult{0.4, 0.6, 0.8, 1.0, 1.2};         // x 1 / conf
    std::vector<double> lambda{30.0, 50.0, 70.0};
    double delta_unit_mm = 0.09;

    std::size_t sigma_c_default = 0;
    std::size_t delta_default = 6;
    std::size_t epsilon_default = 0;
    std::size_t sigma_w_minus_default = 2;
    std::size_t sigma_lh_minus_default = 2;
    std::size_t lambda_default = 1;

    void validate() const;
    /// Randomization collapsed to the default of every set.
    TextureRandomization defaults_only() const;
};

/// Draws each randomized field uniformly from its set; other fields keep
/// the values of `base`. Sigma entries use base.conf.
milling::MillingParams sample_texture_params(const milling::MillingParams& base, const TextureRandomization& rand,
                                             std::uint64_t seed);

enum class Finish { sandblasted, parallel, spiral };
std::string to_string(Finish f);
Finish parse_finish(const std::string& name);

enum class Split { train, val, test };
std::string to_string(Split s);

struct SplitCounts {
    std::size_t train = 0, val = 0, test = 0;
};

/// round(0.7 n), round(0.1 n) and the remainder (for the default ratios).
SplitCounts split_counts(std::size_t n, std::array<double, 3> ratios = {70.0, 10.0, 20.0});

/// Assigns n instance ids to splits with the given counts via a seeded
/// permutation.
std::vector<Split> split_instances(std::size_t n, std::uint64_t seed, std::array<double, 3> ratios = {70.0, 10.0, 20.0});

/// A named planar face of the inspected object.
struct NamedFace {
    std::string name;
    render::Face face;
    double translation_px = 0.0;  // texture translation magnitude for this face
};

/// Rectangular block with the top (A), front (B) and right (C) faces.
std::vector<NamedFace> block_faces(double length_mm, double depth_mm, double height_mm);

struct Viewpoint {
    std::size_t id = 0;
    std::size_t face = 0;
    double angle_deg = 0.0;
};

/// `count` views cycling faces first, then angles.
std::vector<Viewpoint> viewpoint_plan(std::size_t count, std::size_t face_count,
                                      const std::vector<double>& angles_deg = {0.0, 10.0, 20.0});

/// Camera at `distance` from the face center along the normal tilted by
/// angle_deg about the face's v axis, looking at the center.
render::Pose viewpoint_pose(const render::Face& face, double angle_deg, double distance_mm);

struct TextureConfig {
    double texel_mm = 0.01;
    std::optional<std::filesystem::path> sandblast_exemplar;  // grid container or xyz
    double exemplar_std_mm = 0.001;   // stand-in exemplar when no file is given
    double exemplar_corr_px = 2.0;
    std::size_t exemplar_px = 256;
    std::size_t patch_px = 128;
    std::size_t overlap_px = 32;
    FieldStats milling_stats{0.0, 0.002 * 0.002, -0.01, 0.01};
    milling::MillingParams milling;
    TextureRandomization randomization;
};

struct DatasetConfig {
    std::string scale = "desk";
    std::uint64_t seed = 1;
    std::vector<Finish> objects{Finish::parallel, Finish::sandblasted};  // one entry per physical object
    std::size_t instances_per_group = 3;  // K defective and K correct
    std::size_t viewpoints = 3;
    std::size_t texture_instances = 2;    // per finish
    double block_length_mm = 8.0, block_depth_mm = 6.0, block_height_mm = 4.0;
    std::array<double, 3> face_translation_px{5.0, 3.0, 1.0};
    double rotation_range_deg = 15.0;
    double roughness_min = 0.05, roughness_max = 0.3;
    double reflectance = 0.9;
    double focus_distance_mm = 60.0;
    render::PinholeCamera camera{160, 128, 0.02, 16.0, {}};
    render::RingLight light{10.0, 2.0, 1.0};
    render::RenderSettings render{16, 2, 0, true};
    double exposure = 4.0;
    std::vector<defects::DefectSpec> defect_specs = defects::default_defect_specs();
    defects::ImprintOptions imprint;
    masks::FilterOptions mask_filter;
    TextureConfig texture;

    void validate() const;
};

/// Desk preset (small, fully renderable) or the full-size configuration of
/// the reference study (10 objects, K = 30, 9 views, 1224 x 1025, 256 spp,
/// 8 bounces).
DatasetConfig preset(const std::string& scale);

struct ImageRecord {
    std::string image_path;
    std::string label_path;
    std::size_t object = 0;
    std::string instance;
    bool defective = false;
    std::size_t geometry_id = 0;
    std::size_t viewpoint = 0;
    Split split = Split::train;
    bool effectively_correct = false;
    std::string image_hash;
    std::string label_hash;
};

struct FaceTexture {
    std::string face;
    std::size_t texture_instance = 0;
    double rotation_deg = 0.0;
    Vec2 translation_px;
};

struct InstanceRecord {
    std::size_t object = 0;
    std::string instance;
    bool defective = false;
    std::size_t geometry_id = 0;
    double roughness = 0.0;
    Split split = Split::train;
    std::vector<FaceTexture> textures;
};

struct Failure {
    std::string item;
    std::string error;
};

struct DatasetManifest {
    std::string scale;
    std::uint64_t seed = 0;
    bool dry_run = false;
    std::vector<Finish> objects;
    std::vector<Viewpoint> viewpoints;
    std::vector<InstanceRecord> instances;
    std::vector<ImageRecord> images;
    std::vector<Failure> failures;

    std::size_t defective_images() const;
};

/// Builds the manifest and, unless dry_run, generates textures, defects,
/// renders, labels and writes everything below out_dir (paths in the
/// manifest are relative to it). Per-image failures are recorded, not thrown.
DatasetManifest generate_dataset(const DatasetConfig& config, const std::filesystem::path& out_dir, bool dry_run);

/// FNV-1a 64-bit hash as 16 hex digits.
std::string fnv1a_hex(const std::vector<std::uint8_t>& bytes);

/// Texture generation for one finish instance, at config.texture settings.
HeightField generate_texture(Finish finish, const TextureConfig& config, std::size_t rows, std::size_t cols,
                             std::uint64_t seed);

/// Gaussian-filtered white noise used when no measured exemplar is given.
HeightField stand_in_exemplar(const TextureConfig& config, std::uint64_t seed);

}  // namespace surfsynth::dataset
