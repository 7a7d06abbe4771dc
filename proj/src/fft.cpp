// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "surfsynth/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>

namespace surfsynth {

namespace {

// FFTW planning is not thread-safe; execution with distinct arrays is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

// FFTW picks SIMD codelets by array alignment. Always using fftw_malloc'd
// buffers keeps the chosen plan, and hence the rounding, reproducible.
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

struct Plan {
    fftw_plan handle = nullptr;
    ~Plan()
    {
        if (handle) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(handle);
        }
    }
};

}  // namespace

Spectrum fft_forward(const Grid<double>& signal)
{
    require(!signal.empty(), "FFT of an empty signal");
    Spectrum out{signal.rows(), signal.cols(), {}};
    const std::size_t n_complex = out.rows * out.half_cols();
    RealBuffer in(fftw_alloc_real(signal.size()));
    ComplexBuffer spec(fftw_alloc_complex(n_complex));
    std::copy(signal.values().begin(), signal.values().end(), in.get());

    Plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan.handle = fftw_plan_dft_r2c_2d(static_cast<int>(out.rows), static_cast<int>(out.cols),
                                           in.get(), spec.get(), FFTW_ESTIMATE);
    }
    fftw_execute(plan.handle);

    out.data.resize(n_complex);
    for (std::size_t i = 0; i < n_complex; ++i) out.data[i] = {spec[i][0], spec[i][1]};
    return out;
}

Grid<double> fft_inverse(const Spectrum& spectrum)
{
    require(spectrum.rows > 0 && spectrum.cols > 0 &&
                spectrum.data.size() == spectrum.rows * spectrum.half_cols(),
            "malformed spectrum");
    const std::size_t n_real = spectrum.rows * spectrum.cols;
    ComplexBuffer spec(fftw_alloc_complex(spectrum.data.size()));
    RealBuffer out(fftw_alloc_real(n_real));
    for (std::size_t i = 0; i < spectrum.data.size(); ++i) {
        spec[i][0] = spectrum.data[i].real();
        spec[i][1] = spectrum.data[i].imag();
    }

    Plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan.handle = fftw_plan_dft_c2r_2d(static_cast<int>(spectrum.rows),
                                           static_cast<int>(spectrum.cols), spec.get(), out.get(),
                                           FFTW_ESTIMATE);
    }
    fftw_execute(plan.handle);

    const double norm = 1.0 / static_cast<double>(n_real);
    std::vector<double> values(out.get(), out.get() + n_real);
    for (double& v : values) v *= norm;
    return Grid<double>(spectrum.rows, spectrum.cols, std::move(values));
}

}  // namespace surfsynth
