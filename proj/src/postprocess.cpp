// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "surfsynth/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "surfsynth/rng.hpp"

namespace surfsynth::post {

namespace {

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

GrayImage defocus_blur(const GrayImage& img, double radius)
{
    require(radius > 0.0, "defocus radius must be positive");
    const int reach = static_cast<int>(std::floor(radius));
    std::vector<std::pair<int, int>> taps;
    for (int dy = -reach; dy <= reach; ++dy)
        for (int dx = -reach; dx <= reach; ++dx)
            if (dx * dx + dy * dy <= radius * radius) taps.emplace_back(dy, dx);
    const double w = 1.0 / static_cast<double>(taps.size());

    const auto rows = static_cast<int>(img.rows()), cols = static_cast<int>(img.cols());
    GrayImage out(img.rows(), img.cols());
#pragma omp parallel for schedule(static)
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            double acc = 0.0;
            for (const auto& [dy, dx] : taps) {
                const int rr = std::clamp(r + dy, 0, rows - 1), cc = std::clamp(c + dx, 0, cols - 1);
                acc += img(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
            }
            out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc * w;
        }
    return out;
}

GrayImage bloom(const GrayImage& img, const Bloom& p)
{
    require(p.box >= 1, "bloom box size must be positive");
    require(p.gain >= 0.0, "bloom gain must be nonnegative");
    const std::size_t rows = img.rows(), cols = img.cols();
    const auto half = static_cast<std::ptrdiff_t>(p.box / 2);
    GrayImage out = img;
    for (std::size_t c = 0; c < cols; ++c) {
        double col_max = 0.0;
        for (std::size_t r = 0; r < rows; ++r) col_max = std::max(col_max, img(r, c));
        std::vector<double> src(rows, 0.0);
        bool any = false;
        for (std::size_t r = 0; r < rows; ++r)
            if (img(r, c) >= p.threshold) {
                src[r] = col_max;
                any = true;
            }
        if (!any) continue;
        // Window of `box` rows: [r - box/2, r - box/2 + box), zero outside.
        for (std::size_t r = 0; r < rows; ++r) {
            double acc = 0.0;
            const auto lo = static_cast<std::ptrdiff_t>(r) - half;
            for (std::ptrdiff_t k = lo; k < lo + p.box; ++k)
                if (k >= 0 && k < static_cast<std::ptrdiff_t>(rows)) acc += src[static_cast<std::size_t>(k)];
            out(r, c) = clip01(img(r, c) + p.gain * acc / p.box);
        }
    }
    return out;
}

GrayImage add_noise(const GrayImage& img, double amplitude, const Mask* skip_mask, std::uint64_t seed)
{
    require(amplitude >= 0.0, "noise amplitude must be nonnegative");
    if (skip_mask)
        require(skip_mask->rows() == img.rows() && skip_mask->cols() == img.cols(), "noise mask size differs");
    Rng rng = make_rng(seed, 0x401);
    std::normal_distribution<double> normal(0.0, 1.0);
    GrayImage out = img;
    for (std::size_t i = 0; i < img.size(); ++i) {
        const double n = normal(rng);
        if (skip_mask && skip_mask->values()[i]) continue;
        out.values()[i] = clip01(img.values()[i] + n * amplitude / 255.0);
    }
    return out;
}

GrayImage exposure(const GrayImage& img, double stops)
{
    const double scale = std::exp2(stops);
    GrayImage out = img;
    for (double& v : out.values()) v = clip01(v * scale);
    return out;
}

GrayImage post_process(const GrayImage& img, const std::vector<Op>& ops, std::uint64_t seed)
{
    GrayImage cur = img;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const std::uint64_t op_seed = derive_seed(seed, i);
        cur = std::visit(
            [&](const auto& op) -> GrayImage {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, DefocusBlur>) return defocus_blur(cur, op.radius);
                else if constexpr (std::is_same_v<T, Bloom>) return bloom(cur, op);
                else if constexpr (std::is_same_v<T, GaussianNoise>) return add_noise(cur, op.amplitude, nullptr, op_seed);
                else if constexpr (std::is_same_v<T, BackgroundNoise>) return add_noise(cur, op.amplitude, &op.mask, op_seed);
                else return exposure(cur, op.stops);
            },
            ops[i]);
    }
    return cur;
}

GrayImage to_gray(const Image8& img)
{
    GrayImage out(img.rows(), img.cols());
    for (std::size_t i = 0; i < img.size(); ++i) out.values()[i] = img.values()[i] / 255.0;
    return out;
}

Image8 to_8bit(const GrayImage& img)
{
    Image8 out(img.rows(), img.cols());
    for (std::size_t i = 0; i < img.size(); ++i)
        out.values()[i] = static_cast<std::uint8_t>(std::lround(clip01(img.values()[i]) * 255.0));
    return out;
}

}  // namespace surfsynth::post
