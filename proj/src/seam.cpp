// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <limits>
#include <string>

#include "surfsynth/sandblast.hpp"

namespace surfsynth::sandblast {

namespace {

// Vertical-seam DP over an error surface with `steps` rows of `width`
// candidates each. err(step, idx) gives the squared difference.
template <class ErrFn>
SeamPath dp_seam(std::size_t steps, std::size_t width, ErrFn err, SeamOrientation orientation)
{
    Grid<double> cum(steps, width);
    for (std::size_t i = 0; i < width; ++i) cum(0, i) = err(0, i);
    for (std::size_t s = 1; s < steps; ++s) {
        for (std::size_t i = 0; i < width; ++i) {
            double best = cum(s - 1, i == 0 ? 0 : i - 1);
            for (std::size_t j = (i == 0 ? 0 : i - 1) + 1; j <= std::min(i + 1, width - 1); ++j)
                best = std::min(best, cum(s - 1, j));
            cum(s, i) = best + err(s, i);
        }
    }

    SeamPath path{orientation, std::vector<std::size_t>(steps), 0.0};
    std::size_t at = 0;
    for (std::size_t i = 1; i < width; ++i)
        if (cum(steps - 1, i) < cum(steps - 1, at)) at = i;
    path.cost = cum(steps - 1, at);
    path.indices[steps - 1] = at;
    for (std::size_t s = steps - 1; s > 0; --s) {
        const std::size_t lo = at == 0 ? 0 : at - 1;
        const std::size_t hi = std::min(at + 1, width - 1);
        std::size_t best = lo;
        for (std::size_t j = lo + 1; j <= hi; ++j)
            if (cum(s - 1, j) < cum(s - 1, best)) best = j;
        at = best;
        path.indices[s - 1] = at;
    }
    return path;
}

double sq(double v) { return v * v; }

}  // namespace

SeamPath min_cost_seam(const Grid<double>& a, const Grid<double>& b, SeamOrientation orientation)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        fail(Errc::invalid_argument, "min_cost_seam: overlap dimensions differ");
    require(!a.empty(), "min_cost_seam: empty overlap");
    switch (orientation) {
    case SeamOrientation::vertical:
        return dp_seam(a.rows(), a.cols(),
                       [&](std::size_t r, std::size_t c) { return sq(a(r, c) - b(r, c)); }, orientation);
    case SeamOrientation::horizontal:
        return dp_seam(a.cols(), a.rows(),
                       [&](std::size_t c, std::size_t r) { return sq(a(r, c) - b(r, c)); }, orientation);
    case SeamOrientation::l_shaped:
        break;
    }
    fail(Errc::invalid_argument, "min_cost_seam: orientation must be vertical or horizontal");
}

double seam_cost(const Grid<double>& a, const Grid<double>& b, const SeamPath& path)
{
    double cost = 0.0;
    for (std::size_t s = 0; s < path.indices.size(); ++s) {
        const std::size_t i = path.indices[s];
        cost += path.orientation == SeamOrientation::horizontal ? sq(a(i, s) - b(i, s))
                                                                : sq(a(s, i) - b(s, i));
    }
    return cost;
}

StitchResult stitch_patches(const std::vector<HeightField>& patches, std::size_t grid_rows,
                            std::size_t grid_cols, std::size_t overlap)
{
    require(grid_rows >= 1 && grid_cols >= 1, "stitch_patches: empty patch grid");
    require(patches.size() == grid_rows * grid_cols, "stitch_patches: patch count does not match grid");
    const std::size_t ph = patches[0].rows(), pw = patches[0].cols();
    for (const auto& p : patches)
        require(p.rows() == ph && p.cols() == pw, "stitch_patches: patches differ in size");
    if ((grid_cols > 1 && overlap >= pw) || (grid_rows > 1 && overlap >= ph))
        fail(Errc::invalid_argument, "stitch_patches: overlap " + std::to_string(overlap) +
                                         " must be smaller than the patch");

    const std::size_t step_r = ph - (grid_rows > 1 ? overlap : 0);
    const std::size_t step_c = pw - (grid_cols > 1 ? overlap : 0);
    const std::size_t rows = (grid_rows - 1) * step_r + ph;
    const std::size_t cols = (grid_cols - 1) * step_c + pw;

    StitchResult res{HeightField(rows, cols, patches[0].spacing_mm()), Grid<std::uint32_t>(rows, cols), {}};
    HeightField& out = res.field;

    for (std::size_t gr = 0; gr < grid_rows; ++gr) {
        for (std::size_t gc = 0; gc < grid_cols; ++gc) {
            const std::size_t k = gr * grid_cols + gc;
            const HeightField& patch = patches[k];
            const std::size_t r0 = gr * step_r, c0 = gc * step_c;
            const bool left = gc > 0, top = gr > 0;

            SeamPath vseam, hseam;
            if (left) {
                Grid<double> a(ph, overlap), b(ph, overlap);
                for (std::size_t i = 0; i < ph; ++i)
                    for (std::size_t j = 0; j < overlap; ++j) {
                        a(i, j) = out(r0 + i, c0 + j);
                        b(i, j) = patch(i, j);
                    }
                vseam = min_cost_seam(a, b, SeamOrientation::vertical);
                res.seams.push_back(vseam);
            }
            if (top) {
                Grid<double> a(overlap, pw), b(overlap, pw);
                for (std::size_t i = 0; i < overlap; ++i)
                    for (std::size_t j = 0; j < pw; ++j) {
                        a(i, j) = out(r0 + i, c0 + j);
                        b(i, j) = patch(i, j);
                    }
                hseam = min_cost_seam(a, b, SeamOrientation::horizontal);
                res.seams.push_back(hseam);
            }

            // The new patch owns a pixel only if it lies on the new side of
            // every seam; in the corner square of an L-shaped cut both apply.
            for (std::size_t i = 0; i < ph; ++i) {
                for (std::size_t j = 0; j < pw; ++j) {
                    const bool past_v = !left || j >= overlap || j >= vseam.indices[i];
                    const bool past_h = !top || i >= overlap || i >= hseam.indices[j];
                    if (past_v && past_h) {
                        out(r0 + i, c0 + j) = patch(i, j);
                        res.owner(r0 + i, c0 + j) = static_cast<std::uint32_t>(k);
                    }
                }
            }
        }
    }
    return res;
}

}  // namespace surfsynth::sandblast
