// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "surfsynth/grid.hpp"

namespace surfsynth::masks {

struct Component {
    std::uint8_t label = 0;
    std::vector<std::size_t> pixels;  // row-major indices
};

/// 8-connected components of equal nonzero label, in raster order of their
/// first pixel.
std::vector<Component> connected_components(const Mask& labels);

/// Binary dilation by `steps` applications of a 3x3 square. Newly covered
/// pixels take the largest neighbouring label.
Mask dilate(const Mask& labels, int steps);

/// |mean inside - mean of the surrounding ring| with intensities in [0, 1];
/// the ring is the component dilated twice minus the component.
double component_visibility(const GrayImage& image, const Component& comp, std::size_t rows, std::size_t cols);

struct FilterOptions {
    double visibility_threshold = 0.05;
    int dilate_px = 1;
};

/// Drops components whose visibility does not exceed the threshold (ties
/// within 1e-9 are dropped) and dilates the survivors.
Mask filter_and_dilate_masks(const GrayImage& image, const Mask& labels, const FilterOptions& options = {});
Mask filter_and_dilate_masks(const Image8& image, const Mask& labels, const FilterOptions& options = {});

}  // namespace surfsynth::masks
