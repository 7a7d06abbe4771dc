// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "surfsynth/grid.hpp"

namespace surfsynth {

/// Grayscale PNG helpers (libpng). Output is deterministic: no timestamps,
/// fixed compression settings.
void write_png8(const std::filesystem::path& path, const Image8& image);
void write_png16(const std::filesystem::path& path, const Grid<std::uint16_t>& image);

/// Encodes an 8-bit grayscale PNG into memory (used for hashing and tests).
std::vector<std::uint8_t> encode_png8(const Image8& image);

Image8 read_png8(const std::filesystem::path& path);
Grid<std::uint16_t> read_png16(const std::filesystem::path& path);

}  // namespace surfsynth
