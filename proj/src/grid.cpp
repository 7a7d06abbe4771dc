// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "surfsynth/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace surfsynth {

namespace {

// Neumaier-compensated sum; keeps fit_moments accurate to ~1e-15 on large grids.
class CompensatedSum {
public:
    void add(double v)
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void check_finite(std::span<const double> values)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw Error(Errc::invalid_argument,
                        "height field contains a non-finite value at index " + std::to_string(i));
    }
}

}  // namespace

HeightField::HeightField(std::size_t rows, std::size_t cols, double spacing_mm, double fill)
    : grid_(rows, cols, fill), spacing_(spacing_mm)
{
    require(rows > 0 && cols > 0, "height field dimensions must be positive");
    require(spacing_mm > 0.0 && std::isfinite(spacing_mm), "pixel spacing must be positive");
    require(std::isfinite(fill), "height field fill value must be finite");
}

HeightField::HeightField(std::size_t rows, std::size_t cols, double spacing_mm,
                         std::vector<double> data)
    : grid_(rows, cols, std::move(data)), spacing_(spacing_mm)
{
    require(rows > 0 && cols > 0, "height field dimensions must be positive");
    require(spacing_mm > 0.0 && std::isfinite(spacing_mm), "pixel spacing must be positive");
    check_finite(grid_.values());
}

double FieldStats::stddev() const { return std::sqrt(variance); }

FieldStats compute_stats(std::span<const double> values)
{
    require(!values.empty(), "statistics of an empty field");
    CompensatedSum sum;
    double lo = values[0], hi = values[0];
    for (double v : values) {
        sum.add(v);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double n = static_cast<double>(values.size());
    const double mean = sum.value() / n;

    CompensatedSum sq;
    for (double v : values) {
        const double d = v - mean;
        sq.add(d * d);
    }
    const double variance = values.size() > 1 ? sq.value() / (n - 1.0) : 0.0;
    return {std::clamp(mean, lo, hi), variance, lo, hi};
}

HeightField resample_nearest(const HeightField& src, double target_spacing_mm)
{
    require(target_spacing_mm > 0.0, "target spacing must be positive");
    if (target_spacing_mm < src.spacing_mm())
        fail(Errc::invalid_argument, "resample_nearest: upsampling is not supported (target " +
                                         std::to_string(target_spacing_mm) + " mm < source " +
                                         std::to_string(src.spacing_mm()) + " mm)");
    if (target_spacing_mm == src.spacing_mm()) return src;

    const double ratio = target_spacing_mm / src.spacing_mm();
    auto out_len = [&](std::size_t n) {
        const auto m = static_cast<std::size_t>(std::floor(static_cast<double>(n) / ratio + 1e-9));
        return std::max<std::size_t>(m, 1);
    };
    auto src_index = [&](std::size_t i, std::size_t n) {
        const auto s = static_cast<std::size_t>(std::floor((static_cast<double>(i) + 0.5) * ratio));
        return std::min(s, n - 1);
    };

    const std::size_t rows = out_len(src.rows());
    const std::size_t cols = out_len(src.cols());
    HeightField out(rows, cols, target_spacing_mm);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t sr = src_index(r, src.rows());
        for (std::size_t c = 0; c < cols; ++c) out(r, c) = src(sr, src_index(c, src.cols()));
    }
    return out;
}

NormalMap height_to_normal(const HeightField& hf)
{
    require(hf.rows() >= 2 && hf.cols() >= 2, "height_to_normal needs at least 2x2 pixels");
    const std::size_t rows = hf.rows(), cols = hf.cols();
    const double h = hf.spacing_mm();
    NormalMap out(rows, cols);

    auto derivative = [h](double prev, double next, std::size_t steps) {
        return (next - prev) / (static_cast<double>(steps) * h);
    };

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ri = 0; ri < static_cast<std::ptrdiff_t>(rows); ++ri) {
        const auto r = static_cast<std::size_t>(ri);
        const std::size_t r0 = r == 0 ? 0 : r - 1;
        const std::size_t r1 = r + 1 == rows ? r : r + 1;
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t c0 = c == 0 ? 0 : c - 1;
            const std::size_t c1 = c + 1 == cols ? c : c + 1;
            const double dx = derivative(hf(r, c0), hf(r, c1), c1 - c0);
            const double dy = derivative(hf(r0, c), hf(r1, c), r1 - r0);
            out(r, c) = normalize(Vec3{-dx, -dy, 1.0});
        }
    }
    return out;
}

HeightField fit_moments(const HeightField& pre_texture, const FieldStats& target,
                        MomentFormula formula)
{
    const FieldStats pre = compute_stats(pre_texture);
    if (!(pre.variance > 0.0)) fail(Errc::degenerate, "constant pre-texture");
    require(target.variance >= 0.0, "target variance must be nonnegative");

    const double ratio = target.stddev() / pre.stddev();
    double scale = ratio, shift_in = pre.mean, shift_out = target.mean;
    if (formula == MomentFormula::strict_printed) {
        scale = std::sqrt(ratio);
        shift_in = target.mean;
        shift_out = pre.mean;
    }

    std::vector<double> out(pre_texture.size());
    const auto in = pre_texture.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * (in[i] - shift_in) + shift_out;
    return HeightField(pre_texture.rows(), pre_texture.cols(), pre_texture.spacing_mm(),
                       std::move(out));
}

}  // namespace surfsynth
