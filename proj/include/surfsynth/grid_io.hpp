// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "surfsynth/grid.hpp"

namespace surfsynth {

enum class TopographyFormat { xyz_ascii, grid_container };

/// Loads a measured topography. xyz files carry "x y z" per line in
/// micrometers, scanned row-major; values are converted to millimeters and
/// the spacing is inferred from the coordinate deltas.
HeightField load_topography(const std::filesystem::path& path, TopographyFormat format);

/// Writes an xyz file (micrometers) that load_topography reads back to the
/// same doubles.
void write_xyz(const std::filesystem::path& path, const HeightField& hf);

/// Binary grid container, little endian:
///   "SYNH" | u32 version=1 | u32 rows | u32 cols | f64 spacing_mm | f32 heights[rows*cols]
void write_grid(const std::filesystem::path& path, const HeightField& hf);
HeightField read_grid(const std::filesystem::path& path);

/// 16-bit PNG export; values are linearly quantized between the field's
/// min and max, which are stored with the spacing in `<path>.json`.
void write_height_png16(const std::filesystem::path& path, const HeightField& hf);
HeightField read_height_png16(const std::filesystem::path& path);

}  // namespace surfsynth
