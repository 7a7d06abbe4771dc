// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "surfsynth/error.hpp"
#include "surfsynth/vec.hpp"

namespace surfsynth {

/// Dense row-major 2D array.
template <class T>
class Grid {
public:
    Grid() = default;
    Grid(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Grid(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data))
    {
        require(data_.size() == rows_ * cols_, "grid data length does not match rows*cols");
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }
    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    bool operator==(const Grid&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using GrayImage = Grid<double>;        // linear intensities, normalized to [0, 1]
using Image8 = Grid<std::uint8_t>;     // encoded 8-bit grey levels
using Mask = Grid<std::uint8_t>;       // 0 = off, nonzero = on (or a class label)

/// Scalar topography with physical pixel spacing. Heights and spacing are in
/// millimeters.
class HeightField {
public:
    HeightField() = default;
    HeightField(std::size_t rows, std::size_t cols, double spacing_mm, double fill = 0.0);
    HeightField(std::size_t rows, std::size_t cols, double spacing_mm, std::vector<double> data);

    std::size_t rows() const noexcept { return grid_.rows(); }
    std::size_t cols() const noexcept { return grid_.cols(); }
    std::size_t size() const noexcept { return grid_.size(); }
    double spacing_mm() const noexcept { return spacing_; }

    double& operator()(std::size_t r, std::size_t c) { return grid_(r, c); }
    double operator()(std::size_t r, std::size_t c) const { return grid_(r, c); }

    std::span<double> values() noexcept { return grid_.values(); }
    std::span<const double> values() const noexcept { return grid_.values(); }
    const Grid<double>& grid() const noexcept { return grid_; }

    bool operator==(const HeightField&) const = default;

private:
    Grid<double> grid_;
    double spacing_ = 1.0;
};

/// Per-pixel unit surface normals.
class NormalMap {
public:
    NormalMap() = default;
    NormalMap(std::size_t rows, std::size_t cols, Vec3 fill = {0.0, 0.0, 1.0})
        : grid_(rows, cols, fill) {}

    std::size_t rows() const noexcept { return grid_.rows(); }
    std::size_t cols() const noexcept { return grid_.cols(); }
    Vec3& operator()(std::size_t r, std::size_t c) { return grid_(r, c); }
    const Vec3& operator()(std::size_t r, std::size_t c) const { return grid_(r, c); }
    std::span<const Vec3> values() const noexcept { return grid_.values(); }

private:
    Grid<Vec3> grid_;
};

struct FieldStats {
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance
    double min = 0.0;
    double max = 0.0;

    double stddev() const;
};

FieldStats compute_stats(std::span<const double> values);
inline FieldStats compute_stats(const HeightField& hf) { return compute_stats(hf.values()); }

/// Nearest-neighbour downsampling to a coarser pixel spacing. Output pixel i
/// takes the source pixel whose cell contains the output cell center.
HeightField resample_nearest(const HeightField& src, double target_spacing_mm);

/// Normals from central-difference gradients (one-sided at borders).
NormalMap height_to_normal(const HeightField& hf);

enum class MomentFormula {
    mean_variance,  // out = (s_target / s_pre) * (x - m_pre) + m_target
    strict_printed, // out = sqrt(s_target / s_pre) * (x - m_target) + m_pre
};

/// Affine remap of the values so that mean and standard deviation equal the
/// target. `strict_printed` reproduces the literal published formula for
/// comparison only; it does not match moments in general.
HeightField fit_moments(const HeightField& pre_texture, const FieldStats& target,
                        MomentFormula formula = MomentFormula::mean_variance);

}  // namespace surfsynth
