// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "surfsynth/milling.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

#include "surfsynth/rng.hpp"

namespace surfsynth::milling {

namespace {

constexpr std::uint64_t kRingStream = 0x52494E47;
constexpr std::uint64_t kFlipStream = 0x464C4950;
constexpr double kPi = std::numbers::pi;

using Complex = std::complex<double>;

double draw_normal(Rng& rng, double mean, double sigma)
{
    if (sigma <= 0.0) return mean;
    return std::normal_distribution<double>(mean, sigma)(rng);
}

double draw_nonneg(Rng& rng, double mean, double sigma) { return std::max(0.0, draw_normal(rng, mean, sigma)); }

double draw_uniform(Rng& rng, double lo, double hi)
{
    if (hi <= lo) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int draw_poisson(Rng& rng, double mean)
{
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<int>(mean)(rng);
}

double wrap_angle(double a)
{
    a = std::remainder(a, 2.0 * kPi);
    return a <= -kPi ? a + 2.0 * kPi : a;
}

struct Nominal {
    Vec2 center;
    double phi;
};

double max_outer_radius(const MillingParams& p)
{
    return p.d / 2.0 + p.mu_w_plus_o + p.conf * p.sigma_w_plus_o;
}

std::vector<Nominal> parallel_path(const MillingParams& p, double width, double height)
{
    const double rho = p.path_spacing();
    const double margin = max_outer_radius(p);
    const double x0 = -margin, x1 = width + margin;
    const std::size_t per_line = centers_on_segment(x1 - x0, p.delta);
    const auto first = static_cast<long>(-std::ceil(margin / rho));
    const auto last = static_cast<long>(std::ceil((height + margin) / rho));

    std::vector<Nominal> out;
    out.reserve(per_line * static_cast<std::size_t>(last - first + 1));
    for (long m = first; m <= last; ++m) {
        const double y = static_cast<double>(m) * rho;
        const bool reverse = ((m - first) % 2) == 1;
        for (std::size_t k = 0; k < per_line; ++k) {
            const std::size_t idx = reverse ? per_line - 1 - k : k;
            out.push_back({{x0 + static_cast<double>(idx) * p.delta, y}, reverse ? kPi : 0.0});
        }
    }
    return out;
}

std::vector<Nominal> spiral_path(const MillingParams& p, double width, double height)
{
    const double pitch = p.path_spacing() / (2.0 * kPi);  // dr/dtheta
    const Vec2 c{width / 2.0, height / 2.0};
    const double r_max = std::hypot(width, height) / 2.0 + max_outer_radius(p);

    std::vector<Nominal> out;
    double theta = 0.0;
    for (;;) {
        const double r = pitch * theta;
        if (r > r_max) break;
        const double ct = std::cos(theta), st = std::sin(theta);
        const Vec2 tangent{pitch * ct - r * st, pitch * st + r * ct};
        out.push_back({c + Vec2{r * ct, r * st}, wrap_angle(std::atan2(tangent.y, tangent.x))});
        theta += p.delta / std::hypot(r, pitch);
    }
    return out;
}

enum class Component { none, indentation, inner, outer };

struct Shape {
    Component component = Component::none;
    double s = 0.0;
};

Shape radial_shape(const RingInstance& ring, double r)
{
    const double rad = ring.radius;
    if (r < ring.inner_radius() || r > ring.outer_radius()) return {};
    if (ring.w_minus > 0.0 && r >= rad - ring.w_minus && r <= rad)
        return {Component::indentation, -std::cos(kPi * (r - (rad - ring.w_minus / 2.0)) / ring.w_minus)};
    if (r < rad - ring.w_minus) {
        const double c = rad - ring.w_minus - ring.w_plus_i / 2.0;
        return {Component::inner, std::cos(kPi * (r - c) / ring.w_plus_i)};
    }
    if (r > rad && ring.w_plus_o > 0.0) {
        const double c = rad + ring.w_plus_o / 2.0;
        return {Component::outer, std::cos(kPi * (r - c) / ring.w_plus_o)};
    }
    // All widths zero: the support degenerates to the circle itself.
    return {Component::indentation, 0.0};
}

// Noise sum_j sin(tau_j theta + xi_j) = Im(sum_t C_t z^t) with z = e^{i theta}
// and C_t = sum_{j: tau_j = t} e^{i xi_j}; evaluated by Horner's rule.
struct Prepared {
    const RingInstance* ring = nullptr;
    std::vector<Complex> coeffs;  // index = frequency
    Complex heading;              // e^{-i phi}
    Vec2 dir;                     // (cos phi, sin phi)
};

Prepared prepare(const RingInstance& ring)
{
    Prepared p{&ring, {}, std::polar(1.0, -ring.phi), {std::cos(ring.phi), std::sin(ring.phi)}};
    int max_f = -1;
    for (const auto& t : ring.noise) max_f = std::max(max_f, t.frequency);
    if (max_f >= 0) {
        p.coeffs.assign(static_cast<std::size_t>(max_f) + 1, Complex{});
        for (const auto& t : ring.noise) p.coeffs[static_cast<std::size_t>(t.frequency)] += std::polar(1.0, t.shift);
    }
    return p;
}

RingSample evaluate(const Prepared& p, double noise_amp, Vec2 point)
{
    const RingInstance& ring = *p.ring;
    const Vec2 dv = point - ring.center;
    const double r = length(dv);
    const Shape shape = radial_shape(ring, r);
    if (shape.component == Component::none) return {};

    const double u = r > 0.0 ? dot(dv, p.dir) / r : 0.0;
    const double t = 0.5 * (1.0 + u);  // 1 at the front, 0 at the back

    const TiltScaling& tilt = shape.component == Component::indentation ? ring.tilt_minus
                              : shape.component == Component::inner     ? ring.tilt_plus_i
                                                                        : ring.tilt_plus_o;
    double value = shape.s * (tilt.back + (tilt.front - tilt.back) * t);

    if (noise_amp != 0.0 && !p.coeffs.empty() && r > 0.0) {
        const Complex z = Complex(dv.x / r, dv.y / r) * p.heading;
        Complex acc = p.coeffs.back();
        for (std::size_t k = p.coeffs.size() - 1; k-- > 0;) acc = acc * z + p.coeffs[k];
        value += noise_amp * acc.imag();
    }
    return {true, value, ring.b + (ring.a - ring.b) * t};
}

struct Box {
    std::size_t r0 = 0, r1 = 0, c0 = 0, c1 = 0;  // half-open
    bool empty() const { return r0 >= r1 || c0 >= c1; }
};

Box bounding_box(const RingInstance& ring, std::size_t rows, std::size_t cols, double nu)
{
    const double ro = ring.outer_radius();
    auto lo = [&](double v, std::size_t n) {
        return static_cast<std::size_t>(std::clamp(std::floor(v / nu), 0.0, static_cast<double>(n)));
    };
    auto hi = [&](double v, std::size_t n) {
        return static_cast<std::size_t>(std::clamp(std::ceil(v / nu) + 1.0, 0.0, static_cast<double>(n)));
    };
    return {lo(ring.center.y - ro, rows), hi(ring.center.y + ro, rows), lo(ring.center.x - ro, cols),
            hi(ring.center.x + ro, cols)};
}

}  // namespace

void validate(const MillingParams& p)
{
    require(p.conf > 0.0, "conf must be positive");
    require(p.d > 0.0, "ring diameter d must be positive");
    require(p.alpha > 0.0 && p.alpha < 1.0, "alpha must lie in (0, 1)");
    require(p.gamma >= 0.0 && p.gamma < p.alpha, "gamma must lie in [0, alpha)");
    require(p.path_spacing() > 0.0, "path spacing rho must be positive");
    require(p.delta > 0.0, "ring spacing delta must be positive");
    require(p.epsilon >= 0.0 && p.epsilon <= 1.0, "epsilon must lie in [0, 1]");
    for (double s : {p.sigma_c, p.sigma_w_minus, p.sigma_w_plus_i, p.sigma_w_plus_o, p.sigma_lh_minus,
                     p.sigma_lh_plus_i, p.sigma_lh_plus_o})
        require(s >= 0.0, "standard deviations must be nonnegative");
    require(p.mu_w_minus >= 0.0 && p.mu_w_plus_i >= 0.0 && p.mu_w_plus_o >= 0.0,
            "mean ring widths must be nonnegative");
    require(p.lambda >= 0.0 && p.tau >= 0.0, "Poisson means must be nonnegative");
    require(p.noise_amp >= 0.0, "noise amplitude must be nonnegative");
    require(p.a_min >= 0.0 && p.a_min <= p.a_max && p.a_max <= 1.0, "a bounds must satisfy 0 <= a_min <= a_max <= 1");
    require(p.b_min >= 0.0 && p.b_min <= p.b_max && p.b_max <= 1.0, "b bounds must satisfy 0 <= b_min <= b_max <= 1");
}

std::size_t centers_on_segment(double length, double delta)
{
    require(delta > 0.0 && length >= 0.0, "centers_on_segment: need delta > 0 and length >= 0");
    return static_cast<std::size_t>(std::floor(length / delta + 1e-9)) + 1;
}

std::vector<RingInstance> generate_tool_path(const MillingParams& p, std::size_t field_rows,
                                             std::size_t field_cols, double spacing_mm)
{
    validate(p);
    require(field_rows > 0 && field_cols > 0 && spacing_mm > 0.0, "milling field must be nonempty");
    const double width = static_cast<double>(field_cols - 1) * spacing_mm;
    const double height = static_cast<double>(field_rows - 1) * spacing_mm;

    const std::vector<Nominal> nominal =
        p.path_mode == PathMode::parallel ? parallel_path(p, width, height) : spiral_path(p, width, height);

    std::vector<RingInstance> rings(nominal.size());
    for (std::size_t k = 0; k < nominal.size(); ++k) {
        Rng rng = make_rng(p.seed, kRingStream, k);
        RingInstance& ring = rings[k];
        ring.center = {draw_normal(rng, nominal[k].center.x, p.sigma_c),
                       draw_normal(rng, nominal[k].center.y, p.sigma_c)};
        ring.phi = nominal[k].phi;
        ring.radius = p.d / 2.0;
        ring.w_minus = draw_nonneg(rng, p.mu_w_minus, p.sigma_w_minus);
        ring.w_plus_i = draw_nonneg(rng, p.mu_w_plus_i, p.sigma_w_plus_i);
        ring.w_plus_o = draw_nonneg(rng, p.mu_w_plus_o, p.sigma_w_plus_o);
        ring.tilt_minus = {draw_nonneg(rng, p.mu_l_minus, p.sigma_lh_minus),
                           draw_nonneg(rng, p.mu_h_minus, p.sigma_lh_minus)};
        ring.tilt_plus_i = {draw_nonneg(rng, p.mu_l_plus_i, p.sigma_lh_plus_i),
                            draw_nonneg(rng, p.mu_h_plus_i, p.sigma_lh_plus_i)};
        ring.tilt_plus_o = {draw_nonneg(rng, p.mu_l_plus_o, p.sigma_lh_plus_o),
                            draw_nonneg(rng, p.mu_h_plus_o, p.sigma_lh_plus_o)};
        const int terms = draw_poisson(rng, p.lambda);
        ring.noise.resize(static_cast<std::size_t>(terms));
        for (auto& t : ring.noise) {
            t.frequency = draw_poisson(rng, p.tau);
            t.shift = draw_uniform(rng, -kPi, kPi);
        }
        ring.a = draw_uniform(rng, p.a_min, p.a_max);
        ring.b = draw_uniform(rng, p.b_min, p.b_max);
    }

    if (p.epsilon > 0.0 && rings.size() > 1) {
        Rng rng = make_rng(p.seed, kFlipStream);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (std::size_t k = 0; k + 1 < rings.size(); ++k)
            if (u(rng) < p.epsilon) std::swap(rings[k], rings[k + 1]);
    }
    for (std::size_t k = 0; k < rings.size(); ++k) rings[k].order_index = k;
    return rings;
}

double ring_shape(const RingInstance& ring, double r) { return radial_shape(ring, r).s; }

RingSample evaluate_ring(const RingInstance& ring, double noise_amp, Vec2 point)
{
    return evaluate(prepare(ring), noise_amp, point);
}

RingPatch ring_field(const RingInstance& ring, const MillingParams& params, std::size_t field_rows,
                     std::size_t field_cols, double spacing_mm)
{
    const Box box = bounding_box(ring, field_rows, field_cols, spacing_mm);
    RingPatch patch;
    if (box.empty()) return patch;
    patch.row0 = box.r0;
    patch.col0 = box.c0;
    const std::size_t h = box.r1 - box.r0, w = box.c1 - box.c0;
    patch.values = Grid<double>(h, w);
    patch.weights = Grid<double>(h, w);
    patch.inside = Grid<std::uint8_t>(h, w);
    const Prepared prep = prepare(ring);
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j) {
            const Vec2 pt{static_cast<double>(box.c0 + j) * spacing_mm, static_cast<double>(box.r0 + i) * spacing_mm};
            const RingSample s = evaluate(prep, params.noise_amp, pt);
            patch.values(i, j) = s.value;
            patch.weights(i, j) = s.weight;
            patch.inside(i, j) = s.inside ? 1 : 0;
        }
    return patch;
}

HeightField compose_rings(const std::vector<RingInstance>& rings, const MillingParams& params,
                          std::size_t rows, std::size_t cols, double spacing_mm, Exec exec)
{
    require(!rings.empty(), "compose_rings: no rings");
    HeightField f(rows, cols, spacing_mm, 0.0);

    std::vector<Prepared> prepared;
    std::vector<Box> boxes;
    prepared.reserve(rings.size());
    boxes.reserve(rings.size());
    for (const auto& ring : rings) {
        prepared.push_back(prepare(ring));
        boxes.push_back(bounding_box(ring, rows, cols, spacing_mm));
    }

    auto apply = [&](std::size_t k, std::size_t r0, std::size_t r1) {
        const Box& b = boxes[k];
        for (std::size_t i = std::max(r0, b.r0); i < std::min(r1, b.r1); ++i)
            for (std::size_t j = b.c0; j < b.c1; ++j) {
                const Vec2 pt{static_cast<double>(j) * spacing_mm, static_cast<double>(i) * spacing_mm};
                const RingSample s = evaluate(prepared[k], params.noise_amp, pt);
                if (s.inside) f(i, j) = s.weight * s.value + (1.0 - s.weight) * f(i, j);
            }
    };

    if (!is_parallel(exec)) {
        for (std::size_t k = 0; k < rings.size(); ++k) apply(k, 0, rows);
        return f;
    }

    // Each band owns disjoint rows and replays the full ring order, so the
    // per-pixel sequence of updates is the same as in the serial route.
    constexpr std::size_t kBand = 16;
    const auto bands = static_cast<std::ptrdiff_t>((rows + kBand - 1) / kBand);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t band = 0; band < bands; ++band) {
        const std::size_t r0 = static_cast<std::size_t>(band) * kBand;
        const std::size_t r1 = std::min(rows, r0 + kBand);
        for (std::size_t k = 0; k < rings.size(); ++k)
            if (boxes[k].r0 < r1 && boxes[k].r1 > r0) apply(k, r0, r1);
    }
    return f;
}

HeightField generate_milling(const FieldStats& exemplar_stats, const MillingParams& params, std::size_t rows,
                             std::size_t cols, double spacing_mm, Exec exec)
{
    const auto rings = generate_tool_path(params, rows, cols, spacing_mm);
    return fit_moments(compose_rings(rings, params, rows, cols, spacing_mm, exec), exemplar_stats);
}

}  // namespace surfsynth::milling
