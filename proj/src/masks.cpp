// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "surfsynth/masks.hpp"

#include <algorithm>
#include <cmath>

namespace surfsynth::masks {

std::vector<Component> connected_components(const Mask& labels)
{
    const std::size_t rows = labels.rows(), cols = labels.cols();
    std::vector<std::uint8_t> seen(labels.size(), 0);
    std::vector<Component> out;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < labels.size(); ++start) {
        const std::uint8_t lab = labels.values()[start];
        if (lab == 0 || seen[start]) continue;
        Component comp{lab, {}};
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            comp.pixels.push_back(p);
            const std::size_t r = p / cols, c = p % cols;
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    const auto rr = static_cast<std::ptrdiff_t>(r) + dr;
                    const auto cc = static_cast<std::ptrdiff_t>(c) + dc;
                    if (rr < 0 || cc < 0 || rr >= static_cast<std::ptrdiff_t>(rows) ||
                        cc >= static_cast<std::ptrdiff_t>(cols))
                        continue;
                    const std::size_t q = static_cast<std::size_t>(rr) * cols + static_cast<std::size_t>(cc);
                    if (!seen[q] && labels.values()[q] == lab) {
                        seen[q] = 1;
                        stack.push_back(q);
                    }
                }
        }
        std::sort(comp.pixels.begin(), comp.pixels.end());
        out.push_back(std::move(comp));
    }
    return out;
}

Mask dilate(const Mask& labels, int steps)
{
    require(steps >= 0, "dilation steps must be nonnegative");
    Mask cur = labels;
    const std::size_t rows = labels.rows(), cols = labels.cols();
    for (int s = 0; s < steps; ++s) {
        Mask next = cur;
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                if (cur(r, c)) continue;
                std::uint8_t best = 0;
                for (std::size_t rr = r == 0 ? 0 : r - 1; rr <= std::min(rows - 1, r + 1); ++rr)
                    for (std::size_t cc = c == 0 ? 0 : c - 1; cc <= std::min(cols - 1, c + 1); ++cc)
                        best = std::max(best, cur(rr, cc));
                next(r, c) = best;
            }
        cur = std::move(next);
    }
    return cur;
}

double component_visibility(const GrayImage& image, const Component& comp, std::size_t rows, std::size_t cols)
{
    require(image.rows() == rows && image.cols() == cols, "image and mask sizes differ");
    Mask own(rows, cols, 0);
    for (std::size_t p : comp.pixels) own.values()[p] = 1;
    const Mask grown = dilate(own, 2);
    double in = 0.0, ring = 0.0;
    std::size_t n_in = 0, n_ring = 0;
    for (std::size_t i = 0; i < own.size(); ++i) {
        if (own.values()[i]) {
            in += image.values()[i];
            ++n_in;
        } else if (grown.values()[i]) {
            ring += image.values()[i];
            ++n_ring;
        }
    }
    if (n_in == 0 || n_ring == 0) return 0.0;
    return std::abs(in / static_cast<double>(n_in) - ring / static_cast<double>(n_ring));
}

Mask filter_and_dilate_masks(const GrayImage& image, const Mask& labels, const FilterOptions& options)
{
    require(image.rows() == labels.rows() && image.cols() == labels.cols(), "image and mask sizes differ");
    require(options.dilate_px >= 0, "dilation must be nonnegative");
    Mask kept(labels.rows(), labels.cols(), 0);
    for (const Component& comp : connected_components(labels)) {
        const double vis = component_visibility(image, comp, labels.rows(), labels.cols());
        if (vis > options.visibility_threshold + 1e-9)
            for (std::size_t p : comp.pixels) kept.values()[p] = comp.label;
    }
    return dilate(kept, options.dilate_px);
}

Mask filter_and_dilate_masks(const Image8& image, const Mask& labels, const FilterOptions& options)
{
    GrayImage g(image.rows(), image.cols());
    for (std::size_t i = 0; i < image.size(); ++i) g.values()[i] = image.values()[i] / 255.0;
    return filter_and_dilate_masks(g, labels, options);
}

}  // namespace surfsynth::masks
