// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "surfsynth/grid.hpp"

namespace surfsynth::post {

/// Normalized convolution with the disk {dx^2 + dy^2 <= radius^2};
/// borders replicate the edge pixel.
struct DefocusBlur {
    double radius = 1.0;
};

/// Vertical sensor blooming: pixels >= threshold take their column maximum,
/// everything else 0; the result is box-filtered over `box` rows, scaled by
/// `gain` and added to the image with clipping.
struct Bloom {
    double threshold = 0.95;
    int box = 64;
    double gain = 0.02;
};

/// Additive zero-mean Gaussian noise with std amplitude / 255.
struct GaussianNoise {
    double amplitude = 1.0;
};

/// Gaussian noise applied only where `mask` is zero.
struct BackgroundNoise {
    double amplitude = 1.0;
    Mask mask;
};

/// Multiplication by 2^stops with clipping.
struct Exposure {
    double stops = 0.0;
};

using Op = std::variant<DefocusBlur, Bloom, GaussianNoise, BackgroundNoise, Exposure>;

GrayImage defocus_blur(const GrayImage& img, double radius);
GrayImage bloom(const GrayImage& img, const Bloom& params);
GrayImage add_noise(const GrayImage& img, double amplitude, const Mask* skip_mask, std::uint64_t seed);
GrayImage exposure(const GrayImage& img, double stops);

/// Applies `ops` in order to an image with values in [0, 1]. Op i draws its
/// noise from a stream derived from (seed, i).
GrayImage post_process(const GrayImage& img, const std::vector<Op>& ops, std::uint64_t seed);

GrayImage to_gray(const Image8& img);
Image8 to_8bit(const GrayImage& img);

}  // namespace surfsynth::post
