// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <vector>

#include "surfsynth/grid.hpp"

namespace surfsynth {

using Complex = std::complex<double>;

/// Half spectrum of a real 2D signal: rows x (cols/2 + 1) coefficients.
struct Spectrum {
    std::size_t rows = 0;
    std::size_t cols = 0;  // columns of the real-space signal
    std::vector<Complex> data;

    std::size_t half_cols() const { return cols / 2 + 1; }
    Complex& operator()(std::size_t r, std::size_t k) { return data[r * half_cols() + k]; }
    const Complex& operator()(std::size_t r, std::size_t k) const { return data[r * half_cols() + k]; }
};

/// Unnormalized forward DFT (FFTW r2c).
Spectrum fft_forward(const Grid<double>& signal);

/// Inverse DFT including the 1/(rows*cols) factor, so that
/// fft_inverse(fft_forward(x)) == x up to rounding.
Grid<double> fft_inverse(const Spectrum& spectrum);

}  // namespace surfsynth
