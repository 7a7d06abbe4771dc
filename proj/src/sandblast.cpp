// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "surfsynth/sandblast.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "surfsynth/fft.hpp"
#include "surfsynth/rng.hpp"

namespace surfsynth::sandblast {

namespace {

constexpr std::uint64_t kNoiseStream = 0xAD5;

FieldStats checked_stats(const HeightField& exemplar)
{
    const FieldStats s = compute_stats(exemplar);
    if (!(s.variance > 0.0)) fail(Errc::degenerate, "constant exemplar has no texture to synthesize");
    return s;
}

Grid<double> white_noise(std::size_t rows, std::size_t cols, std::uint64_t seed)
{
    Rng rng = make_rng(seed, kNoiseStream);
    std::normal_distribution<double> normal(0.0, 1.0);
    Grid<double> noise(rows, cols);
    for (double& v : noise.values()) v = normal(rng);
    return noise;
}

HeightField crop(const HeightField& src, std::size_t rows, std::size_t cols)
{
    if (rows == src.rows() && cols == src.cols()) return src;
    HeightField out(rows, cols, src.spacing_mm());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) out(r, c) = src(r, c);
    return out;
}

}  // namespace

void validate(const SandblastParams& p)
{
    require(p.out_rows > 0 && p.out_cols > 0, "sandblast output size must be positive");
    require(p.patch_rows > 0 && p.patch_cols > 0, "sandblast patch size must be positive");
    require(p.target_spacing_mm > 0.0, "sandblast target spacing must be positive");
    require(p.overlap_px > 0 && p.overlap_px < std::min(p.patch_rows, p.patch_cols),
            "overlap must be positive and smaller than the patch size");
}

HeightField extend_input(const HeightField& exemplar, std::size_t out_rows, std::size_t out_cols)
{
    if (out_rows < exemplar.rows() || out_cols < exemplar.cols())
        fail(Errc::invalid_argument, "extend_input: target " + std::to_string(out_rows) + "x" +
                                         std::to_string(out_cols) + " is smaller than the exemplar");
    const double mean = compute_stats(exemplar).mean;
    const double gain = std::sqrt(static_cast<double>(out_rows * out_cols) /
                                  static_cast<double>(exemplar.rows() * exemplar.cols()));
    HeightField out(out_rows, out_cols, exemplar.spacing_mm(), mean);
    for (std::size_t r = 0; r < exemplar.rows(); ++r)
        for (std::size_t c = 0; c < exemplar.cols(); ++c)
            out(r, c) = gain * (exemplar(r, c) - mean) + mean;
    return out;
}

HeightField adsn_sample(const HeightField& exemplar, std::size_t out_rows, std::size_t out_cols,
                        std::uint64_t seed)
{
    require(out_rows > 0 && out_cols > 0, "ADSN output size must be positive");
    checked_stats(exemplar);

    const std::size_t rows = std::max(out_rows, exemplar.rows());
    const std::size_t cols = std::max(out_cols, exemplar.cols());
    const HeightField base =
        (rows == exemplar.rows() && cols == exemplar.cols()) ? exemplar : extend_input(exemplar, rows, cols);
    const double mean = compute_stats(base).mean;

    const double norm = 1.0 / std::sqrt(static_cast<double>(rows * cols));
    Grid<double> spot(rows, cols);
    for (std::size_t i = 0; i < spot.size(); ++i) spot.values()[i] = norm * (base.values()[i] - mean);

    Spectrum s = fft_forward(spot);
    const Spectrum w = fft_forward(white_noise(rows, cols, seed));
    for (std::size_t i = 0; i < s.data.size(); ++i) s.data[i] *= w.data[i];
    const Grid<double> conv = fft_inverse(s);

    std::vector<double> values(conv.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = mean + conv.values()[i];
    return crop(HeightField(rows, cols, exemplar.spacing_mm(), std::move(values)), out_rows, out_cols);
}

HeightField rpn_sample(const HeightField& exemplar, std::uint64_t seed)
{
    const double mean = checked_stats(exemplar).mean;
    Grid<double> centered(exemplar.rows(), exemplar.cols());
    for (std::size_t i = 0; i < centered.size(); ++i)
        centered.values()[i] = exemplar.values()[i] - mean;

    Spectrum s = fft_forward(centered);
    const Spectrum w = fft_forward(white_noise(exemplar.rows(), exemplar.cols(), seed));
    for (std::size_t i = 0; i < s.data.size(); ++i) {
        const double mag_w = std::abs(w.data[i]);
        const Complex phase = mag_w > 0.0 ? w.data[i] / mag_w : Complex(1.0, 0.0);
        s.data[i] = std::abs(s.data[i]) * phase;
    }
    s.data[0] = 0.0;
    const Grid<double> g = fft_inverse(s);

    std::vector<double> values(g.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = mean + g.values()[i];
    return HeightField(exemplar.rows(), exemplar.cols(), exemplar.spacing_mm(), std::move(values));
}

std::size_t patches_needed(std::size_t out, std::size_t patch, std::size_t overlap)
{
    require(overlap < patch, "overlap must be smaller than the patch");
    if (out <= patch) return 1;
    const std::size_t stride = patch - overlap;
    return 1 + (out - patch + stride - 1) / stride;
}

std::uint64_t patch_seed(std::uint64_t seed, std::size_t row, std::size_t col)
{
    return seed ^ mix64((static_cast<std::uint64_t>(row) << 32) | static_cast<std::uint64_t>(col));
}

HeightField generate_sandblast(const HeightField& exemplar, const SandblastParams& params, Exec exec)
{
    validate(params);
    const HeightField source = resample_nearest(exemplar, params.target_spacing_mm);
    if (params.patch_rows > source.rows() || params.patch_cols > source.cols())
        fail(Errc::invalid_argument,
             "patch " + std::to_string(params.patch_rows) + "x" + std::to_string(params.patch_cols) +
                 " exceeds the resampled exemplar " + std::to_string(source.rows()) + "x" +
                 std::to_string(source.cols()));
    checked_stats(source);

    const std::size_t grid_rows = patches_needed(params.out_rows, params.patch_rows, params.overlap_px);
    const std::size_t grid_cols = patches_needed(params.out_cols, params.patch_cols, params.overlap_px);
    const std::size_t patch_rows = params.patch_rows;
    const std::size_t patch_cols = params.patch_cols;

    std::vector<HeightField> patches(grid_rows * grid_cols);
    const auto n = static_cast<std::ptrdiff_t>(patches.size());
    ExceptionSlot errors;
#pragma omp parallel for schedule(dynamic) if (is_parallel(exec))
    for (std::ptrdiff_t k = 0; k < n; ++k) errors.run([&] {
        const auto idx = static_cast<std::size_t>(k);
        const std::uint64_t seed = patch_seed(params.seed, idx / grid_cols, idx % grid_cols);
        patches[idx] = params.generator == Generator::adsn
                           ? adsn_sample(source, patch_rows, patch_cols, seed)
                           : crop(rpn_sample(source, seed), patch_rows, patch_cols);
    });
    errors.rethrow();

    const StitchResult stitched = stitch_patches(patches, grid_rows, grid_cols, params.overlap_px);
    return crop(stitched.field, params.out_rows, params.out_cols);
}

}  // namespace surfsynth::sandblast
