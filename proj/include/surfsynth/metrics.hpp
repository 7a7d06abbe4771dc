// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "surfsynth/exec.hpp"
#include "surfsynth/grid.hpp"

namespace surfsynth::metrics {

/// 1 - W1(hist_a, hist_b) / 255 over the masked pixels of two 8-bit images.
double hist_wd(const Image8& a, const Image8& b, const Mask& mask);

/// 1 - mean |a - b| / 255 over the mask.
double mae(const Image8& a, const Image8& b, const Mask& mask);

struct SsimOptions {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double data_range = 255.0;
};

/// Mean SSIM over the windows lying fully inside the mask, clamped to
/// [0, 1]. Separable Gaussian filtering; rows in parallel.
double ssim(const Image8& a, const Image8& b, const Mask& mask, const SsimOptions& options = {},
            Exec exec = Exec::parallel);

/// Direct per-window evaluation of the same quantity.
double ssim_reference(const Image8& a, const Image8& b, const Mask& mask, const SsimOptions& options = {});

enum class Metric { hist_wd, mae, ssim };
inline constexpr std::array<Metric, 3> kAllMetrics{Metric::hist_wd, Metric::mae, Metric::ssim};
std::string to_string(Metric m);

double similarity(Metric metric, const Image8& a, const Image8& b, const Mask& mask);

struct BestMatch {
    double value = 0.0;
    std::size_t index = 0;
};

/// Highest similarity over the instances; ties go to the smallest index.
BestMatch best_match_similarity(const Image8& real, const std::vector<Image8>& instances, const Mask& mask,
                                Metric metric);

/// Intensity model mapping synthetic to real grey levels:
/// aligned = factor * synthetic + bias.
struct AlignmentParams {
    double factor = 1.0;
    int bias = 0;
};

void validate(const AlignmentParams& p);

/// Values estimated manually for the three finishes in the reference study.
std::optional<AlignmentParams> preset_alignment(const std::string& texture);

enum class AlignmentMethod {
    moments,  // factor from masked std ratio, bias from masked means
    gap,      // bias from the leading-zero histogram gap, factor from gap-corrected means
};

struct AlignmentEstimate {
    AlignmentParams params;
    double real_gap = 0.0;   // mean lowest occupied grey level of the real images
    double synth_gap = 0.0;
};

/// Pools the masked pixels of each set. Each mask list holds one mask per
/// image of its set or a single mask shared by all of them.
AlignmentEstimate estimate_alignment(const std::vector<Image8>& real, const std::vector<Mask>& real_masks,
                                     const std::vector<Image8>& synth, const std::vector<Mask>& synth_masks,
                                     AlignmentMethod method = AlignmentMethod::moments);

Image8 apply_alignment(const Image8& synth, const AlignmentParams& params);

/// Per-texture similarity values (best-match means) and the query indices.
struct MetricValues {
    double hist_wd = 0.0;
    double mae = 0.0;
    double ssim = 0.0;
};

struct BestMatchRecord {
    std::string viewpoint;
    std::size_t real_index = 0;
    std::array<std::size_t, 3> synth_index{};  // per metric, in kAllMetrics order
};

struct TextureSimilarity {
    std::string texture;
    MetricValues values;
    std::vector<BestMatchRecord> matches;
};

struct SimilarityReport {
    std::vector<TextureSimilarity> textures;
    MetricValues overall;

    /// Metrics as rows, textures (then "all") as columns. The LPIPS row is
    /// reserved and printed empty.
    std::string table() const;
};

struct ViewpointSet {
    std::string viewpoint;
    std::vector<Image8> real;
    std::vector<Image8> synth;  // already aligned and post-processed
    Mask mask;
};

struct TextureSet {
    std::string texture;
    std::vector<ViewpointSet> viewpoints;
};

SimilarityReport evaluate_similarity(const std::vector<TextureSet>& sets, Exec exec = Exec::parallel);

}  // namespace surfsynth::metrics
