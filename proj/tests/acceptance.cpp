// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any of them fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "surfsynth/config_json.hpp"
#include "surfsynth/dataset.hpp"
#include "surfsynth/defects.hpp"
#include "surfsynth/grid.hpp"
#include "surfsynth/metrics.hpp"
#include "surfsynth/milling.hpp"
#include "surfsynth/render.hpp"
#include "surfsynth/rng.hpp"
#include "surfsynth/sandblast.hpp"

namespace {

using namespace surfsynth;
namespace fs = std::filesystem;

// Tolerances and budgets.
constexpr double kAdsnMeanFraction = 0.99;
constexpr double kRpnRelTol = 1e-6;
constexpr double kLagTolPx = 1.0;
constexpr double kProfileTol = 1e-9;
constexpr double kBoundSlack = 1e-12;
constexpr double kMomentTol = 1e-9;
constexpr double kAreaTol = 0.05;
constexpr double kRenderSigmas = 3.0;
constexpr double kAlignTol = 0.05;
constexpr double kBestMatchRate = 0.95;

constexpr double kAdsnBudget = 60.0;
constexpr double kRpnBudget = 5.0;
constexpr double kSeamBudget = 10.0;
constexpr double kMillingBudget = 120.0;
constexpr double kRenderBudget = 300.0;
constexpr double kDeskBudget = 1800.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome with_budget(Outcome o, double seconds, double budget)
{
    if (seconds >= budget) {
        o.pass = false;
        o.detail += fmt(" [over budget %.0f s]", budget);
    }
    return o;
}

Grid<double> random_grid(std::size_t rows, std::size_t cols, Rng& rng)
{
    std::normal_distribution<double> n;
    Grid<double> g(rows, cols);
    for (double& v : g.values()) v = n(rng);
    return g;
}

Grid<double> transpose(const Grid<double>& g)
{
    Grid<double> t(g.cols(), g.rows());
    for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c) t(c, r) = g(r, c);
    return t;
}

Grid<double> minus_mean(const HeightField& h)
{
    const std::span<const double> v = h.values();
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    Grid<double> g(h.rows(), h.cols());
    for (std::size_t i = 0; i < v.size(); ++i) g.values()[i] = v[i] - m;
    return g;
}

dataset::TextureConfig small_exemplar_config()
{
    dataset::TextureConfig cfg;
    cfg.exemplar_px = 64;
    cfg.exemplar_corr_px = 2.0;
    return cfg;
}

// ---------------------------------------------------------------------------

Outcome check_adsn()
{
    const HeightField ex = dataset::stand_in_exemplar(small_exemplar_config(), 11);
    const std::size_t R = ex.rows(), C = ex.cols(), N = 1000;
    const Grid<double> centered = minus_mean(ex);
    const double mu = compute_stats(ex).mean;
    double var = 0.0;
    for (double v : centered.values()) var += v * v;
    var /= static_cast<double>(centered.size());

    Rng pick(5);
    std::vector<std::pair<std::size_t, std::size_t>> freqs;
    while (freqs.size() < 5) {
        const std::size_t k = pick() % R, l = 1 + pick() % (C / 2 - 1);
        if (std::find(freqs.begin(), freqs.end(), std::pair{k, l}) == freqs.end()) freqs.emplace_back(k, l);
    }

    Grid<double> sum(R, C, 0.0);
    std::vector<std::vector<double>> moduli(freqs.size());
    for (std::size_t i = 0; i < N; ++i) {
        const HeightField x = sandblast::adsn_sample(ex, R, C, derive_seed(77, i));
        for (std::size_t p = 0; p < x.size(); ++p) sum.values()[p] += x.values()[p];
        Grid<double> xc(R, C);
        for (std::size_t p = 0; p < x.size(); ++p) xc.values()[p] = x.values()[p] - mu;
        for (std::size_t f = 0; f < freqs.size(); ++f)
            moduli[f].push_back(std::abs(oracle::dft_at(xc, freqs[f].first, freqs[f].second)));
    }
    const double bound = 3.0 * std::sqrt(var) / std::sqrt(static_cast<double>(N));
    std::size_t within = 0;
    for (double s : sum.values())
        if (std::abs(s / static_cast<double>(N) - mu) <= bound) ++within;
    const double frac = static_cast<double>(within) / static_cast<double>(sum.size());

    bool ks_ok = true;
    double worst = 0.0;
    for (std::size_t f = 0; f < freqs.size(); ++f) {
        const double sigma = std::abs(oracle::dft_at(centered, freqs[f].first, freqs[f].second)) / std::sqrt(2.0);
        const double d = oracle::ks_statistic(moduli[f], [sigma](double x) {
            return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x * x / (2.0 * sigma * sigma));
        });
        worst = std::max(worst, d);
        ks_ok = ks_ok && d < oracle::ks_critical_001(N);
    }
    return {frac >= kAdsnMeanFraction && ks_ok,
            fmt("mean within 3 sigma/sqrt(N): %.4f of pixels; worst KS D = %.4f (critical %.4f)", frac, worst,
                oracle::ks_critical_001(N))};
}

Outcome check_rpn()
{
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 10; ++i) {
        Rng rng(derive_seed(3, i));
        const std::size_t rows = 24 + 8 * (i % 3), cols = 32 + 4 * (i % 4);
        const Grid<double> g = random_grid(rows, cols, rng);
        const HeightField ex(rows, cols, 0.01, std::vector<double>(g.values().begin(), g.values().end()));
        const HeightField out = sandblast::rpn_sample(ex, derive_seed(4, i));
        const Grid<oracle::Cplx> a = oracle::naive_dft(minus_mean(ex));
        const Grid<oracle::Cplx> b = oracle::naive_dft(minus_mean(out));
        double peak = 0.0;
        for (const auto& v : a.values()) peak = std::max(peak, std::abs(v));
        for (std::size_t p = 1; p < a.size(); ++p) {
            const double ma = std::abs(a.values()[p]);
            if (ma <= 1e-9 * peak) continue;
            worst = std::max(worst, std::abs(std::abs(b.values()[p]) - ma) / ma);
        }
    }
    return {worst <= kRpnRelTol, fmt("max relative modulus deviation %.3e", worst)};
}

Outcome check_seam()
{
    Rng rng(21);
    std::size_t mismatches = 0, cases = 0;
    for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{6, 4}, {8, 8}}) {
        for (int i = 0; i < 200; ++i) {
            const Grid<double> a = random_grid(rows, cols, rng), b = random_grid(rows, cols, rng);
            const double ref = oracle::exhaustive_seam_cost(a, b);
            const auto v = sandblast::min_cost_seam(a, b, sandblast::SeamOrientation::vertical);
            const auto h = sandblast::min_cost_seam(transpose(a), transpose(b), sandblast::SeamOrientation::horizontal);
            const bool ok = v.cost == ref && sandblast::seam_cost(a, b, v) == ref && h.cost == ref &&
                            sandblast::seam_cost(transpose(a), transpose(b), h) == ref;
            mismatches += ok ? 0 : 1;
            ++cases;
        }
    }
    return {mismatches == 0, fmt("%zu of %zu overlaps differ from exhaustive search", mismatches, cases)};
}

milling::MillingParams quiet_milling(double d, double alpha)
{
    milling::MillingParams p;
    p.d = d;
    p.alpha = alpha;
    p.gamma = 0.04;
    p.sigma_c = 0.0;
    p.epsilon = 0.0;
    p.sigma_w_minus = p.sigma_w_plus_i = p.sigma_w_plus_o = 0.0;
    p.sigma_lh_minus = p.sigma_lh_plus_i = p.sigma_lh_plus_o = 0.0;
    p.lambda = 0.0;
    p.noise_amp = 0.0;
    p.a_min = p.a_max = 0.2;
    p.b_min = p.b_max = 0.3;
    p.path_mode = milling::PathMode::parallel;
    return p;
}

// Lag in [lo, hi] maximizing the column-averaged vertical autocorrelation.
std::size_t vertical_autocorr_peak(const HeightField& f, std::size_t lo, std::size_t hi)
{
    const Grid<double> g = minus_mean(f);
    std::size_t best = lo;
    double best_v = -std::numeric_limits<double>::infinity();
    for (std::size_t lag = lo; lag <= hi && lag < g.rows(); ++lag) {
        double acc = 0.0;
        for (std::size_t r = 0; r + lag < g.rows(); ++r)
            for (std::size_t c = 0; c < g.cols(); ++c) acc += g(r, c) * g(r + lag, c);
        acc /= static_cast<double>((g.rows() - lag) * g.cols());
        if (acc > best_v) {
            best_v = acc;
            best = lag;
        }
    }
    return best;
}

Outcome check_milling()
{
    constexpr double nu = 0.0061;
    double worst_lag = 0.0;
    for (double d : {4.0, 8.0})
        for (double alpha : {0.2, 0.5, 0.8}) {
            const milling::MillingParams p = quiet_milling(d, alpha);
            const double rho_px = p.path_spacing() / nu;
            const auto rows = static_cast<std::size_t>(std::ceil(3.5 * rho_px));
            const auto rings = milling::generate_tool_path(p, rows, 128, nu);
            const HeightField f = milling::compose_rings(rings, p, rows, 128, nu);
            const std::size_t lag = vertical_autocorr_peak(f, static_cast<std::size_t>(0.5 * rho_px),
                                                           static_cast<std::size_t>(1.5 * rho_px));
            worst_lag = std::max(worst_lag, std::abs(static_cast<double>(lag) - rho_px));
        }

    double worst_profile = 0.0;
    Rng rng(9);
    std::uniform_real_distribution<double> width(0.01, 0.2);
    for (int i = 0; i < 20; ++i) {
        milling::RingInstance ring;
        ring.center = {1.0, 1.0};
        ring.radius = 2.0;
        ring.w_minus = width(rng);
        ring.w_plus_i = width(rng);
        ring.w_plus_o = width(rng);
        ring.phi = 0.3 * i;
        const double R = ring.radius, w = ring.w_minus, wi = ring.w_plus_i, wo = ring.w_plus_o;
        for (int k = 0; k <= 2000; ++k) {
            const double r = (R - w - wi - 0.05) + (w + wi + wo + 0.1) * k / 2000.0;
            const double expect = oracle::ring_profile(r, R, w, wi, wo);
            worst_profile = std::max(worst_profile, std::abs(milling::ring_shape(ring, r) - expect));
            const double theta = 0.7 * k;
            const Vec2 pt{ring.center.x + r * std::cos(theta), ring.center.y + r * std::sin(theta)};
            const milling::RingSample s = milling::evaluate_ring(ring, 0.0, pt);
            if (s.inside) worst_profile = std::max(worst_profile, std::abs(s.value - expect));
        }
    }
    return {worst_lag <= kLagTolPx && worst_profile <= kProfileTol,
            fmt("worst autocorrelation lag error %.2f px; worst profile error %.2e", worst_lag, worst_profile)};
}

Outcome check_convex_bound()
{
    std::size_t violations = 0;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        Rng rng(derive_seed(31, i));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        milling::MillingParams p;
        p.d = 0.5 + u(rng);
        p.alpha = 0.1 + 0.7 * u(rng);
        p.delta = 0.05 + 0.1 * u(rng);
        p.sigma_c = 0.01 * u(rng);
        p.epsilon = 0.5 * u(rng);
        p.noise_amp = 0.0;
        p.path_mode = u(rng) < 0.5 ? milling::PathMode::parallel : milling::PathMode::spiral;
        p.seed = derive_seed(32, i);
        const std::size_t rows = 40 + i % 20, cols = 50 + i % 30;
        const double nu = 0.01;
        const auto rings = milling::generate_tool_path(p, rows, cols, nu);
        const HeightField f = milling::compose_rings(rings, p, rows, cols, nu);
        Grid<double> lo(rows, cols, 0.0), hi(rows, cols, 0.0);
        for (const auto& ring : rings) {
            const milling::RingPatch patch = milling::ring_field(ring, p, rows, cols, nu);
            for (std::size_t r = 0; r < patch.values.rows(); ++r)
                for (std::size_t c = 0; c < patch.values.cols(); ++c) {
                    if (!patch.inside(r, c)) continue;
                    double& a = lo(patch.row0 + r, patch.col0 + c);
                    double& b = hi(patch.row0 + r, patch.col0 + c);
                    a = std::min(a, patch.values(r, c));
                    b = std::max(b, patch.values(r, c));
                }
        }
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                const double excess = std::max(lo(r, c) - f(r, c), f(r, c) - hi(r, c));
                if (excess > kBoundSlack) ++violations;
                worst = std::max(worst, excess);
            }
    }
    return {violations == 0, fmt("%zu pixels outside their ring bound (worst excess %.2e)", violations, worst)};
}

Outcome check_fit_moments()
{
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        Rng rng(derive_seed(41, i));
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const std::size_t rows = 16 + i % 17, cols = 20 + i % 13;
        const double scale = std::pow(10.0, 3.0 * u(rng)), offset = 5.0 * u(rng);
        std::vector<double> data(rows * cols);
        for (double& v : data) v = offset + scale * u(rng);
        const HeightField pre(rows, cols, 0.01, data);
        FieldStats target;
        target.mean = 0.01 * u(rng);
        const double target_std = 0.001 + 0.01 * (1.0 + u(rng));
        target.variance = target_std * target_std;
        const HeightField out = fit_moments(pre, target);

        long double sum = 0.0L, sq = 0.0L;
        for (double v : out.values()) sum += v;
        const long double n = static_cast<long double>(out.size());
        const long double mean = sum / n;
        for (double v : out.values()) sq += (v - mean) * (v - mean);
        const auto std_dev = static_cast<double>(std::sqrt(sq / (n - 1.0L)));
        worst = std::max({worst, std::abs(static_cast<double>(mean) - target.mean) / std::max(1.0, std::abs(target.mean)),
                          std::abs(std_dev - target_std) / std::max(1.0, target_std)});
    }
    return {worst <= kMomentTol, fmt("worst moment error %.2e", worst)};
}

Outcome check_imprint()
{
    const double nu = 0.01;
    std::size_t raised = 0, shell_leaks = 0;
    double worst_area = 0.0;

    Rng rng(51);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        std::normal_distribution<double> n(0.0, 0.002);
        HeightField rough(200, 200, nu);
        for (double& v : rough.values()) v = n(rng);
        const auto specs = defects::default_defect_specs();
        const auto& spec = specs[i % specs.size()];
        defects::DefectInstance inst;
        inst.kind = spec.kind;
        inst.label = defects::class_of(spec.kind);
        inst.diameter_mm = spec.diameter_mm.lo + u(rng) * (spec.diameter_mm.hi - spec.diameter_mm.lo);
        inst.elongation = spec.elongation.lo + u(rng) * (spec.elongation.hi - spec.elongation.lo);
        inst.depth_mm = spec.depth_mm.lo + u(rng) * (spec.depth_mm.hi - spec.depth_mm.lo);
        inst.rotation_rad = 6.283 * u(rng);
        inst.path_length_mm = std::min(1.5, spec.path_length_mm.hi);
        inst.step_size_mm = spec.step_size_mm;
        inst.curviness = spec.curviness;
        inst.walk_seed = derive_seed(52, static_cast<std::uint64_t>(i));
        const defects::ToolPatch tool = defects::build_tool(inst, nu);
        for (double shrink : {0.9, 0.95, 1.0}) {
            const auto res = defects::imprint_with_masks(rough, tool, {1.0, 1.0}, {shrink, 0.0});
            for (std::size_t p = 0; p < rough.size(); ++p) {
                if (res.surface.values()[p] > rough.values()[p]) ++raised;
                if (res.shell.values()[p] && !res.solid.values()[p]) ++shell_leaks;
            }
        }
    }

    for (int i = 0; i < 10; ++i) {
        const double diameter = 0.5 + 1.5 * u(rng), elong = 1.0 + u(rng), rot = 3.14 * u(rng);
        const HeightField flat(400, 400, nu, 0.0);
        const defects::ToolPatch tool = defects::dent_tool(diameter, elong, 0.05, rot, nu);
        const auto res = defects::imprint_with_masks(flat, tool, {2.0, 2.0});
        const auto count = std::count_if(res.solid.values().begin(), res.solid.values().end(),
                                         [](std::uint8_t v) { return v != 0; });
        const double area = static_cast<double>(count) * nu * nu;
        const double expect = oracle::kPi * (diameter / 2.0) * (diameter * elong / 2.0);
        worst_area = std::max(worst_area, std::abs(area - expect) / expect);
    }
    return {raised == 0 && shell_leaks == 0 && worst_area <= kAreaTol,
            fmt("%zu raised pixels; %zu shell pixels outside solid; worst dent area error %.2f%%", raised, shell_leaks,
                100.0 * worst_area)};
}

Outcome check_renderer()
{
    render::Scene scene;
    scene.camera = {256, 256, 0.02, 16.0, render::look_at({0.0, 0.0, 60.0}, {0.0, 0.0, 0.0}, {0.0, 1.0, 0.0})};
    scene.light = {10.0, 2.0, 1.0};
    render::FaceBinding fb;
    fb.face = {{-15.0, -15.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, 30.0, 30.0};
    fb.reflectance = 0.9;
    scene.faces = {fb};
    scene.diffuse_override = true;
    render::RenderSettings settings{1024, 2, 3, false};
    const render::RenderResult res = render::render_image(scene, settings);

    oracle::TorusFrame frame{{0.0, 0.0, 60.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, -1.0}, 10.0, 2.0};
    const double albedo = fb.reflectance / oracle::kPi;
    const double on_axis = albedo * oracle::on_axis_torus_irradiance(1.0, 10.0, 2.0, 60.0);

    std::size_t misses = 0, checked = 0;
    double worst_z = 0.0;
    const std::array<std::array<int, 2>, 6> pixels{{{128, 128}, {0, 0}, {255, 40}, {64, 200}, {200, 100}, {10, 250}}};
    for (auto [px, py] : pixels) {
        const render::Ray ray = render::camera_ray(scene.camera, px + 0.5, py + 0.5);
        const double t = -ray.origin.z / ray.dir.z;
        const Vec3 p = ray.origin + ray.dir * t;
        double ref = albedo * oracle::torus_irradiance(frame, 1.0, p, {0.0, 0.0, 1.0}, 1e-9);
        const auto x = static_cast<std::size_t>(px), y = static_cast<std::size_t>(py);
        const double se = std::sqrt(res.variance(y, x));
        double z = std::abs(res.radiance(y, x) - ref) / se;
        worst_z = std::max(worst_z, z);
        misses += z <= kRenderSigmas ? 0 : 1;
        ++checked;
    }
    // The two light oracles must agree where both apply.
    const double quad_axis = albedo * oracle::torus_irradiance(frame, 1.0, {0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, 1e-9);
    const double oracle_gap = std::abs(quad_axis - on_axis) / on_axis;
    if (oracle_gap > 1e-6) ++misses;

    render::Scene bright = scene;
    bright.light.radiance = 4.0;
    render::RenderSettings quick{16, 2, 3, false};
    const render::RenderResult base = render::render_image(scene, quick);
    const render::RenderResult scaled = render::render_image(bright, quick);
    std::size_t nonlinear = 0;
    for (std::size_t i = 0; i < base.radiance.size(); ++i)
        if (scaled.radiance.values()[i] != 4.0 * base.radiance.values()[i]) ++nonlinear;

    std::size_t silhouette_diffs = 0;
    Rng rng(61);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < 5; ++s) {
        const double L = 6.0 + 6.0 * u(rng), D = 4.0 + 4.0 * u(rng), H = 3.0 + 3.0 * u(rng);
        render::Scene blk;
        const Vec3 centre{L / 2.0, D / 2.0, H / 2.0};
        const Vec3 eye = centre + normalize(Vec3{0.3 + u(rng), 0.3 + u(rng), 0.3 + u(rng)}) * (40.0 + 20.0 * u(rng));
        blk.camera = {160, 128, 0.03, 16.0, render::look_at(eye, centre, {0.0, 0.0, 1.0})};
        blk.light = {10.0, 2.0, 1.0};
        for (const auto& nf : dataset::block_faces(L, D, H)) {
            render::FaceBinding b;
            b.face = nf.face;
            b.roughness = 0.05 + 0.25 * u(rng);
            blk.faces.push_back(b);
        }
        const render::RenderResult img = render::render_image(blk, {8, 2, static_cast<std::uint64_t>(s), false});
        const render::Annotation ann = render::render_annotation(blk);
        for (std::size_t i = 0; i < ann.object.size(); ++i) {
            const bool obj = ann.object.values()[i] != 0;
            const bool lit = img.radiance.values()[i] > 0.0;
            if (obj != (img.coverage.values()[i] != 0) || (lit && !obj)) ++silhouette_diffs;
        }
    }
    return {misses == 0 && nonlinear == 0 && silhouette_diffs == 0,
            fmt("%zu of %zu reference pixels beyond %.0f standard errors (worst %.2f); on-axis oracles differ by %.1e; "
                "%zu nonlinear pixels; %zu silhouette differences",
                misses, checked, kRenderSigmas, worst_z, oracle_gap, nonlinear, silhouette_diffs)};
}

Image8 smooth_noise(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo, double hi)
{
    Rng rng(seed);
    std::normal_distribution<double> n;
    Grid<double> g(rows, cols);
    for (double& v : g.values()) v = n(rng);
    Grid<double> tmp = g;
    constexpr int kR = 3;
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                double acc = 0.0;
                for (int k = -kR; k <= kR; ++k) acc += pass == 0 ? g(r, (c + cols + k) % cols) : g((r + rows + k) % rows, c);
                tmp(r, c) = acc;
            }
        std::swap(g, tmp);
    }
    const auto [mn, mx] = std::minmax_element(g.values().begin(), g.values().end());
    Image8 out(rows, cols);
    for (std::size_t i = 0; i < g.size(); ++i)
        out.values()[i] = static_cast<std::uint8_t>(std::lround(lo + (hi - lo) * (g.values()[i] - *mn) / (*mx - *mn)));
    return out;
}

Image8 shift_cols(const Image8& img, std::size_t k)
{
    Image8 out(img.rows(), img.cols());
    for (std::size_t r = 0; r < img.rows(); ++r)
        for (std::size_t c = 0; c < img.cols(); ++c) out(r, c) = img(r, (c + k) % img.cols());
    return out;
}

Image8 contrast(const Image8& img, double f)
{
    Image8 out(img.rows(), img.cols());
    for (std::size_t i = 0; i < img.size(); ++i)
        out.values()[i] = static_cast<std::uint8_t>(std::lround(128.0 + f * (img.values()[i] - 128.0)));
    return out;
}

Outcome check_metrics()
{
    std::size_t failures = 0;
    const Mask full(48, 64, 1);
    for (int a : {0, 17, 128, 255})
        for (int b : {0, 3, 200, 255}) {
            const Image8 x(48, 64, static_cast<std::uint8_t>(a)), y(48, 64, static_cast<std::uint8_t>(b));
            if (metrics::hist_wd(x, y, full) != 1.0 - std::abs(a - b) / 255.0) ++failures;
        }
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Image8 x = smooth_noise(48, 64, s, 10, 240);
        if (metrics::ssim(x, x, full) != 1.0) ++failures;
    }

    const Image8 base = smooth_noise(48, 64, 99, 20, 230);
    const std::vector<std::size_t> shifts{0, 1, 2, 3, 5, 8};
    const std::vector<double> contrasts{1.0, 0.9, 0.75, 0.6, 0.4, 0.2};
    auto hierarchy_ok = [&](metrics::Metric m, const std::vector<Image8>& chain) {
        double prev = std::numeric_limits<double>::infinity();
        for (const auto& c : chain) {
            const double v = metrics::similarity(m, base, c, full);
            if (!(v < prev)) return false;
            prev = v;
        }
        std::vector<Image8> reversed(chain.rbegin(), chain.rend());
        return metrics::best_match_similarity(base, reversed, full, m).index == chain.size() - 1;
    };
    std::vector<Image8> by_shift, by_contrast;
    for (std::size_t k : shifts) by_shift.push_back(shift_cols(base, k));
    for (double f : contrasts) by_contrast.push_back(contrast(base, f));
    for (metrics::Metric m : {metrics::Metric::ssim, metrics::Metric::mae})
        if (!hierarchy_ok(m, by_shift)) ++failures;
    for (metrics::Metric m : metrics::kAllMetrics)
        if (!hierarchy_ok(m, by_contrast)) ++failures;
    return {failures == 0, fmt("%zu closed-form or hierarchy violations", failures)};
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Outcome check_dataset()
{
    std::vector<std::string> problems;
    const dataset::DatasetConfig paper = dataset::preset("paper");
    const dataset::DatasetManifest m = dataset::generate_dataset(paper, {}, true);
    if (m.images.size() != 5400) problems.push_back(fmt("paper images %zu", m.images.size()));
    if (m.defective_images() != 2700) problems.push_back(fmt("paper defective %zu", m.defective_images()));
    if (m.objects.size() != 10) problems.push_back("paper object count");

    std::map<std::string, std::set<dataset::Split>> instance_splits;
    std::array<std::array<std::size_t, 3>, 2> per_group{};
    for (const auto& inst : m.instances) {
        instance_splits[std::to_string(inst.object) + "/" + inst.instance].insert(inst.split);
        if (inst.object == 0) ++per_group[inst.defective ? 1 : 0][static_cast<std::size_t>(inst.split)];
    }
    for (const auto& [name, splits] : instance_splits)
        if (splits.size() != 1) problems.push_back("instance " + name + " in several splits");
    for (const auto& g : per_group)
        if (g != std::array<std::size_t, 3>{21, 3, 6}) problems.push_back("split counts not 21/3/6");
    for (const auto& img : m.images) {
        const auto it = std::find_if(m.instances.begin(), m.instances.end(), [&](const auto& inst) {
            return inst.object == img.object && inst.instance == img.instance;
        });
        if (it == m.instances.end() || it->split != img.split) {
            problems.push_back("image split differs from its instance");
            break;
        }
    }

    const fs::path root = fs::temp_directory_path() / fmt("surfsynth_acceptance_%d", static_cast<int>(::getpid()));
    const dataset::DatasetConfig desk = dataset::preset("desk");
    std::vector<std::string> manifests;
    for (int run = 0; run < 2; ++run) {
        const fs::path dir = root / std::to_string(run);
        fs::create_directories(dir);
        const dataset::DatasetManifest d = dataset::generate_dataset(desk, dir, false);
        manifests.push_back(io::to_json(d).dump(2));
        if (run > 0) continue;
        if (d.images.size() != 36) problems.push_back(fmt("desk images %zu", d.images.size()));
        if (!d.failures.empty()) problems.push_back(fmt("desk failures %zu", d.failures.size()));
        for (const auto& img : d.images) {
            if (!fs::exists(dir / img.image_path) || !fs::exists(dir / img.label_path)) {
                problems.push_back("missing " + img.image_path);
                continue;
            }
            const std::string bytes = read_file(dir / img.image_path);
            if (dataset::fnv1a_hex({bytes.begin(), bytes.end()}) != img.image_hash)
                problems.push_back("hash mismatch " + img.image_path);
        }
    }
    if (manifests[0] != manifests[1]) problems.push_back("desk manifests differ between runs");
    std::error_code ec;
    fs::remove_all(root, ec);

    std::string detail = fmt("paper dry run %zu images (%zu defective); desk run %s", m.images.size(),
                             m.defective_images(), manifests[0] == manifests[1] ? "reproducible" : "not reproducible");
    for (const auto& p : problems) detail += "; " + p;
    return {problems.empty(), detail};
}

Outcome check_self_consistency()
{
    constexpr double kFactor = 1.3;
    constexpr int kBias = 20;
    constexpr std::size_t kInstances = 20;
    const Mask mask(64, 80, 1);
    std::vector<Image8> synth, real;
    Rng rng(71);
    std::normal_distribution<double> noise(0.0, 2.0);
    for (std::size_t i = 0; i < kInstances; ++i) {
        synth.push_back(smooth_noise(64, 80, derive_seed(72, i), 30, 150));
        Image8 r(64, 80);
        for (std::size_t p = 0; p < r.size(); ++p)
            r.values()[p] = static_cast<std::uint8_t>(
                std::clamp(std::lround(kFactor * synth.back().values()[p] + kBias + noise(rng)), 0L, 255L));
        real.push_back(r);
    }
    const metrics::AlignmentEstimate est = metrics::estimate_alignment(real, {mask}, synth, {mask});
    const double factor_err = std::abs(est.params.factor - kFactor) / kFactor;
    const double bias_err = std::abs(est.params.bias - kBias) / static_cast<double>(kBias);

    std::vector<Image8> aligned;
    for (const auto& s : synth) aligned.push_back(metrics::apply_alignment(s, est.params));
    std::size_t hits = 0, queries = 0;
    for (metrics::Metric m : metrics::kAllMetrics)
        for (std::size_t j = 0; j < kInstances; ++j) {
            hits += metrics::best_match_similarity(real[j], aligned, mask, m).index == j ? 1 : 0;
            ++queries;
        }
    const double rate = static_cast<double>(hits) / static_cast<double>(queries);
    return {factor_err <= kAlignTol && bias_err <= kAlignTol && rate >= kBestMatchRate,
            fmt("factor %.4f (err %.2f%%), bias %d (err %.2f%%), best match %.1f%%", est.params.factor,
                100.0 * factor_err, est.params.bias, 100.0 * bias_err, 100.0 * rate)};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget_s;
};

}  // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {"adsn-law", check_adsn, kAdsnBudget},
        {"rpn-modulus", check_rpn, kRpnBudget},
        {"seam-oracle", check_seam, kSeamBudget},
        {"milling-geometry", check_milling, kMillingBudget},
        {"convex-bound", check_convex_bound, 0.0},
        {"fit-moments", check_fit_moments, 0.0},
        {"defect-imprint", check_imprint, 0.0},
        {"renderer-oracle", check_renderer, kRenderBudget},
        {"metrics-closed-forms", check_metrics, 0.0},
        {"dataset-structure", check_dataset, kDeskBudget},
        {"self-consistency", check_self_consistency, 0.0},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0.0) o = with_budget(o, secs, c.budget_s);
        std::printf("%s %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
