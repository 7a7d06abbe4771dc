// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "surfsynth/exec.hpp"
#include "surfsynth/grid.hpp"

namespace surfsynth::sandblast {

enum class Generator { adsn, rpn };

struct SandblastParams {
    std::size_t out_rows = 1024;
    std::size_t out_cols = 1024;
    double target_spacing_mm = 0.0061;
    std::size_t patch_rows = 512;
    std::size_t patch_cols = 512;
    std::size_t overlap_px = 256;
    Generator generator = Generator::adsn;
    std::uint64_t seed = 0;
};

/// Rejects parameter sets that violate the overlap / size invariants.
void validate(const SandblastParams& params);

/// Pads the exemplar with its mean to out_rows x out_cols after amplifying
/// the original support by sqrt(out_area / exemplar_area) about the mean.
/// This keeps the per-pixel ADSN variance equal to the exemplar variance.
HeightField extend_input(const HeightField& exemplar, std::size_t out_rows, std::size_t out_cols);

/// One realization of asymptotic discrete spot noise: mean + the normalized
/// spot (exemplar - mean) / sqrt(M N) periodically convolved with unit
/// white Gaussian noise. Computed in the Fourier domain at
/// max(exemplar, requested) size, then cropped.
HeightField adsn_sample(const HeightField& exemplar, std::size_t out_rows, std::size_t out_cols,
                        std::uint64_t seed);

/// Random phase noise: keeps the Fourier modulus of (exemplar - mean) and
/// replaces the phase with that of a real white-noise image, which is
/// uniform and Hermitian-symmetric.
HeightField rpn_sample(const HeightField& exemplar, std::uint64_t seed);

enum class SeamOrientation { vertical, horizontal, l_shaped };

/// Minimum-cost cut through an overlap. For a vertical seam `indices[r]` is
/// the cut column in row r; for a horizontal seam `indices[c]` is the cut row
/// in column c. Pixels before the cut keep the existing content.
struct SeamPath {
    SeamOrientation orientation = SeamOrientation::vertical;
    std::vector<std::size_t> indices;
    double cost = 0.0;
};

/// Dynamic-programming seam over squared differences of two equally sized
/// overlaps. Ties resolve toward the smaller index.
SeamPath min_cost_seam(const Grid<double>& overlap_a, const Grid<double>& overlap_b,
                       SeamOrientation orientation);

/// Sum of squared differences along a path, accumulated in path order.
double seam_cost(const Grid<double>& overlap_a, const Grid<double>& overlap_b, const SeamPath& path);

struct StitchResult {
    HeightField field;
    Grid<std::uint32_t> owner;  // index (row-major in the patch grid) of the source patch
    std::vector<SeamPath> seams;
};

/// Raster-scan Efros-Freeman quilting of a patch_grid_rows x patch_grid_cols
/// grid of equally sized patches (row-major in `patches`). No blending: every
/// output pixel is copied from exactly one patch.
StitchResult stitch_patches(const std::vector<HeightField>& patches, std::size_t grid_rows,
                            std::size_t grid_cols, std::size_t overlap_px);

/// Patches per axis needed to cover `out` pixels with the given overlap.
std::size_t patches_needed(std::size_t out, std::size_t patch, std::size_t overlap);

/// Seed of patch (row, col): seed XOR a hash of the position.
std::uint64_t patch_seed(std::uint64_t seed, std::size_t row, std::size_t col);

/// Full pipeline: resample to the target spacing, synthesize patches (in
/// parallel unless exec == serial), stitch, crop.
HeightField generate_sandblast(const HeightField& exemplar, const SandblastParams& params,
                               Exec exec = Exec::parallel);

}  // namespace surfsynth::sandblast
