// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "surfsynth/exec.hpp"
#include "surfsynth/grid.hpp"
#include "surfsynth/vec.hpp"

namespace surfsynth::milling {

enum class PathMode { parallel, spiral };

/// Parameters of the milling texture model. Lengths in millimeters. Defaults
/// are the nominal values of the parameter table (d = 4 mm, alpha = 0.2).
/// Standard deviations follow the conf rule: sigma = half range / conf.
struct MillingParams {
    double conf = 3.0;

    // tool path
    double d = 4.0;          // ring diameter
    double alpha = 0.2;      // overlap of neighbouring tool paths
    double gamma = 0.04;     // overlap reduction (blades do not reach the tool edge)
    double delta = 0.09;     // spacing of ring centers along the path
    double sigma_c = 0.01 * 0.09 / 3.0;  // center jitter std (isotropic)
    double epsilon = 0.01;   // probability that a ring swaps order with its successor
    PathMode path_mode = PathMode::parallel;

    // ring appearance
    double mu_w_minus = 0.05, sigma_w_minus = 0.025 / 3.0;
    double mu_w_plus_i = 0.025, sigma_w_plus_i = 0.1 / 3.0;
    double mu_w_plus_o = 0.025, sigma_w_plus_o = 0.1 / 3.0;
    double mu_l_minus = 0.7, mu_h_minus = 1.0, sigma_lh_minus = 0.8 / 3.0;
    double mu_l_plus_i = 0.0, mu_h_plus_i = 0.2, sigma_lh_plus_i = 0.5 / 3.0;
    double mu_l_plus_o = 0.2, mu_h_plus_o = 0.5, sigma_lh_plus_o = 0.5 / 3.0;
    double lambda = 50.0;     // Poisson mean of the number of sine curves
    double tau = 50.0;        // Poisson mean of their frequency
    double noise_amp = 0.02;  // relative to the unit indentation depth

    // ring interaction
    double a_min = 0.0, a_max = 0.3;  // weight at the ring front
    double b_min = 0.1, b_max = 0.4;  // weight at the ring back

    std::uint64_t seed = 0;

    /// Distance between neighbouring tool paths: (1 - (alpha - gamma)) * d.
    double path_spacing() const { return (1.0 - (alpha - gamma)) * d; }
};

void validate(const MillingParams& params);

/// Standard deviation giving `conf`-sigma coverage of mean +/- half_range.
constexpr double conf_sigma(double half_range, double conf = 3.0) { return half_range / conf; }

/// Front (l) and back (h) scaling of one ring component under tool tilt.
struct TiltScaling {
    double front = 1.0;
    double back = 1.0;
};

struct NoiseTerm {
    int frequency = 0;   // tau_kj
    double shift = 0.0;  // xi_kj in (-pi, pi)
};

struct RingInstance {
    Vec2 center;                 // jittered center, mm
    std::size_t order_index = 0; // position in the composition order
    double phi = 0.0;            // tool motion direction, (-pi, pi]
    double radius = 2.0;         // d / 2
    double w_minus = 0.0, w_plus_i = 0.0, w_plus_o = 0.0;
    TiltScaling tilt_minus, tilt_plus_i, tilt_plus_o;
    std::vector<NoiseTerm> noise;
    double a = 0.0;  // interaction weight at the front
    double b = 0.0;  // interaction weight at the back

    double inner_radius() const { return radius - w_minus - w_plus_i; }
    double outer_radius() const { return radius + w_plus_o; }
};

/// Number of centers placed on a straight path of `length` mm at spacing delta.
std::size_t centers_on_segment(double length, double delta);

/// Nominal path + jitter + order flips. The path extends past the field by
/// the ring radius so that every pixel is covered.
std::vector<RingInstance> generate_tool_path(const MillingParams& params, std::size_t field_rows,
                                             std::size_t field_cols, double spacing_mm);

/// Height (R = S * T + N) and interaction weight L of one ring at a point.
struct RingSample {
    bool inside = false;
    double value = 0.0;
    double weight = 0.0;
};

/// Pure radial shape S(r) of a ring without tilt or noise.
double ring_shape(const RingInstance& ring, double r);

/// Evaluates ring `k` at a physical point (mm).
RingSample evaluate_ring(const RingInstance& ring, double noise_amp, Vec2 point);

/// Ring rasterized onto its bounding box within a rows x cols field.
struct RingPatch {
    std::size_t row0 = 0, col0 = 0;
    Grid<double> values;
    Grid<double> weights;
    Grid<std::uint8_t> inside;
};

RingPatch ring_field(const RingInstance& ring, const MillingParams& params, std::size_t field_rows,
                     std::size_t field_cols, double spacing_mm);

/// f_k = L_k R_k + (1 - L_k) f_{k-1}, f_0 = 0, in ring order.
/// `serial` walks rings over their bounding boxes; `parallel` splits the
/// field into row bands that each replay the ring sequence.
HeightField compose_rings(const std::vector<RingInstance>& rings, const MillingParams& params,
                          std::size_t rows, std::size_t cols, double spacing_mm,
                          Exec exec = Exec::parallel);

/// Path, rings, composition and moment fit against the measurement stats.
HeightField generate_milling(const FieldStats& exemplar_stats, const MillingParams& params,
                             std::size_t rows, std::size_t cols, double spacing_mm,
                             Exec exec = Exec::parallel);

}  // namespace surfsynth::milling
