// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "surfsynth/defects.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "surfsynth/rng.hpp"

namespace surfsynth::defects {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kDefectStream = 0xDEF;
constexpr std::uint64_t kWalkStream = 0x5C;

double uniform(Rng& rng, Range r)
{
    if (r.hi <= r.lo) return r.lo;
    return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

Vec2 sample_position(Rng& rng, const FaceExtent& face, PositionDistribution dist)
{
    if (dist == PositionDistribution::uniform)
        return {uniform(rng, {0.0, face.width_mm}), uniform(rng, {0.0, face.height_mm})};
    std::normal_distribution<double> nx(face.width_mm / 2.0, face.width_mm / 6.0);
    std::normal_distribution<double> ny(face.height_mm / 2.0, face.height_mm / 6.0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const Vec2 p{nx(rng), ny(rng)};
        if (p.x >= 0.0 && p.x <= face.width_mm && p.y >= 0.0 && p.y <= face.height_mm) return p;
    }
    return {face.width_mm / 2.0, face.height_mm / 2.0};
}

// Squared distance from p to segment [a, b].
double segment_dist2(Vec2 p, Vec2 a, Vec2 b)
{
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    const Vec2 d = p - (a + ab * t);
    return dot(d, d);
}

}  // namespace

std::string to_string(DefectKind kind)
{
    switch (kind) {
    case DefectKind::small_dent: return "small_dent";
    case DefectKind::big_dent: return "big_dent";
    case DefectKind::flat_scratch: return "flat_scratch";
    case DefectKind::curvy_scratch: return "curvy_scratch";
    }
    return "unknown";
}

DefectKind parse_defect_kind(const std::string& name)
{
    for (DefectKind k : {DefectKind::small_dent, DefectKind::big_dent, DefectKind::flat_scratch,
                         DefectKind::curvy_scratch})
        if (to_string(k) == name) return k;
    fail(Errc::parse, "unknown defect kind '" + name + "'");
}

bool is_scratch(DefectKind kind) { return kind == DefectKind::flat_scratch || kind == DefectKind::curvy_scratch; }

DefectClass class_of(DefectKind kind) { return is_scratch(kind) ? DefectClass::scratch : DefectClass::dent; }

void validate(const DefectSpec& s)
{
    require(s.quantity >= 0, "defect quantity must be nonnegative");
    for (const Range& r : {s.diameter_mm, s.elongation, s.depth_mm, s.path_length_mm})
        require(r.lo <= r.hi, "defect range low exceeds high");
    if (s.quantity == 0) return;
    require(s.diameter_mm.lo > 0.0, "defect diameter must be positive");
    if (is_scratch(s.kind)) {
        require(s.step_size_mm > 0.0, "scratch step size must be positive");
        require(s.path_length_mm.lo >= s.step_size_mm, "scratch path length must be at least one step");
        require(s.curviness >= 0.0, "scratch curviness must be nonnegative");
    } else {
        require(s.elongation.lo >= 1.0, "dent elongation must be >= 1");
        require(s.depth_mm.lo > 0.0, "dent depth must be positive");
    }
}

std::vector<DefectSpec> default_defect_specs()
{
    std::vector<DefectSpec> specs(4);
    specs[0] = {DefectKind::small_dent, 5, {0.02, 0.2}, {1.0, 2.0}, {0.05, 0.2}, {}, 0.0, 0.0};
    specs[1] = {DefectKind::big_dent, 3, {0.2, 1.0}, {1.0, 4.0}, {0.2, 1.0}, {}, 0.0, 0.0};
    specs[2] = {DefectKind::flat_scratch, 2, {0.02, 0.2}, {1.0, 1.0}, {}, {5.0, 20.0}, 0.1, 0.01};
    specs[3] = {DefectKind::curvy_scratch, 2, {0.02, 0.1}, {1.0, 1.0}, {}, {10.0, 20.0}, 1.0, 0.3};
    return specs;
}

std::vector<DefectInstance> sample_defect_set(const std::vector<DefectSpec>& specs,
                                              const std::vector<FaceExtent>& faces,
                                              PositionDistribution distribution, std::uint64_t seed)
{
    require(!faces.empty(), "sample_defect_set: no faces");
    std::vector<double> areas;
    for (const auto& f : faces) {
        require(f.width_mm > 0.0 && f.height_mm > 0.0, "face dimensions must be positive");
        areas.push_back(f.width_mm * f.height_mm);
    }

    std::vector<DefectInstance> out;
    for (std::size_t s = 0; s < specs.size(); ++s) {
        const DefectSpec& spec = specs[s];
        validate(spec);
        for (int q = 0; q < spec.quantity; ++q) {
            Rng rng = make_rng(seed, kDefectStream, s, static_cast<std::uint64_t>(q));
            DefectInstance inst;
            inst.kind = spec.kind;
            inst.label = class_of(spec.kind);
            inst.face = std::discrete_distribution<std::size_t>(areas.begin(), areas.end())(rng);
            inst.position = sample_position(rng, faces[inst.face], distribution);
            inst.diameter_mm = uniform(rng, spec.diameter_mm);
            inst.rotation_rad = uniform(rng, {-kPi, kPi});
            if (is_scratch(spec.kind)) {
                inst.path_length_mm = uniform(rng, spec.path_length_mm);
                inst.step_size_mm = spec.step_size_mm;
                inst.curviness = spec.curviness;
                inst.walk_seed = derive_seed(seed, kWalkStream, s, static_cast<std::uint64_t>(q));
            } else {
                inst.elongation = uniform(rng, spec.elongation);
                inst.depth_mm = uniform(rng, spec.depth_mm);
            }
            out.push_back(inst);
        }
    }
    return out;
}

ToolPatch dent_tool(double diameter_mm, double elongation, double depth_mm, double rotation_rad, double spacing_mm)
{
    require(diameter_mm > 0.0 && depth_mm > 0.0 && spacing_mm > 0.0, "dent_tool: dimensions must be positive");
    require(elongation >= 1.0, "dent_tool: elongation must be >= 1");
    const double a = diameter_mm / 2.0, b = diameter_mm * elongation / 2.0;
    const auto half = static_cast<std::size_t>(std::ceil(b / spacing_mm)) + 1;
    const std::size_t n = 2 * half + 1;

    ToolPatch tool{Grid<double>(n, n, 0.0), spacing_mm, half, half};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Vec2 off{(static_cast<double>(j) - static_cast<double>(half)) * spacing_mm,
                           (static_cast<double>(i) - static_cast<double>(half)) * spacing_mm};
            const Vec2 q = rotate(off, -rotation_rad);
            const double e = (q.x / a) * (q.x / a) + (q.y / b) * (q.y / b);
            if (e < 1.0) tool.depth(i, j) = -depth_mm * std::sqrt(1.0 - e);
        }
    return tool;
}

ScratchTool scratch_tool(double path_length_mm, double step_size_mm, double diameter_mm, double curviness,
                         std::uint64_t seed, double spacing_mm, double depth_ratio)
{
    require(step_size_mm > 0.0, "scratch_tool: degenerate step size");
    require(path_length_mm >= step_size_mm, "scratch_tool: path shorter than one step");
    require(diameter_mm > 0.0 && spacing_mm > 0.0 && depth_ratio > 0.0, "scratch_tool: dimensions must be positive");
    require(curviness >= 0.0, "scratch_tool: curviness must be nonnegative");

    Rng rng = make_rng(seed);
    double heading = std::uniform_real_distribution<double>(-kPi, kPi)(rng);
    std::normal_distribution<double> turn(0.0, curviness > 0.0 ? curviness : 1.0);
    const auto segments = static_cast<std::size_t>(std::ceil(path_length_mm / step_size_mm - 1e-9));

    std::vector<Vec2> pts{{0.0, 0.0}};
    double remaining = path_length_mm;
    for (std::size_t s = 0; s < segments; ++s) {
        if (s > 0 && curviness > 0.0) heading += turn(rng);
        const double len = std::min(step_size_mm, remaining);
        remaining -= len;
        pts.push_back(pts.back() + Vec2{std::cos(heading), std::sin(heading)} * len);
    }

    Vec2 lo = pts[0], hi = pts[0];
    for (const Vec2& p : pts) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    const Vec2 mid = (lo + hi) * 0.5;
    for (Vec2& p : pts) p = p - mid;

    const double radius = diameter_mm / 2.0;
    const double depth = depth_ratio * diameter_mm;
    const double half_w = (hi.x - lo.x) / 2.0 + radius, half_h = (hi.y - lo.y) / 2.0 + radius;
    const auto hc = static_cast<std::size_t>(std::ceil(half_w / spacing_mm)) + 1;
    const auto hr = static_cast<std::size_t>(std::ceil(half_h / spacing_mm)) + 1;

    ScratchTool out{{Grid<double>(2 * hr + 1, 2 * hc + 1, 0.0), spacing_mm, hr, hc}, pts};
    Grid<double>& g = out.patch.depth;
    auto to_col = [&](double x) { return x / spacing_mm + static_cast<double>(hc); };
    auto to_row = [&](double y) { return y / spacing_mm + static_cast<double>(hr); };

    // Each segment is rasterized over its own bounding box; the groove is the
    // pointwise minimum over segments.
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        const Vec2 a = pts[s], b = pts[s + 1];
        const auto c0 = static_cast<std::size_t>(std::max(0.0, std::floor(to_col(std::min(a.x, b.x) - radius))));
        const auto c1 = static_cast<std::size_t>(std::min(static_cast<double>(g.cols() - 1), std::ceil(to_col(std::max(a.x, b.x) + radius))));
        const auto r0 = static_cast<std::size_t>(std::max(0.0, std::floor(to_row(std::min(a.y, b.y) - radius))));
        const auto r1 = static_cast<std::size_t>(std::min(static_cast<double>(g.rows() - 1), std::ceil(to_row(std::max(a.y, b.y) + radius))));
        for (std::size_t i = r0; i <= r1; ++i)
            for (std::size_t j = c0; j <= c1; ++j) {
                const Vec2 p{(static_cast<double>(j) - static_cast<double>(hc)) * spacing_mm,
                             (static_cast<double>(i) - static_cast<double>(hr)) * spacing_mm};
                const double q = segment_dist2(p, a, b) / (radius * radius);
                if (q < 1.0) g(i, j) = std::min(g(i, j), -depth * std::sqrt(1.0 - q));
            }
    }
    return out;
}

ToolPatch build_tool(const DefectInstance& inst, double spacing_mm, double scratch_depth_ratio)
{
    if (is_scratch(inst.kind))
        return scratch_tool(inst.path_length_mm, inst.step_size_mm, inst.diameter_mm, inst.curviness, inst.walk_seed,
                            spacing_mm, scratch_depth_ratio)
            .patch;
    return dent_tool(inst.diameter_mm, inst.elongation, inst.depth_mm, inst.rotation_rad, spacing_mm);
}

ImprintResult imprint_with_masks(const HeightField& surface, const ToolPatch& tool, Vec2 position_mm,
                                 const ImprintOptions& options)
{
    require(options.shell_shrink >= 0.9 && options.shell_shrink <= 1.0, "shell_shrink must lie in [0.9, 1.0]");
    require(options.rim_fraction >= 0.0, "rim_fraction must be nonnegative");
    const double nu = surface.spacing_mm();
    require(std::abs(tool.spacing_mm - nu) <= 1e-12 * nu, "tool and surface spacing differ");

    ImprintResult res{surface, Mask(surface.rows(), surface.cols(), 0), Mask(surface.rows(), surface.cols(), 0), false};
    const long ar = std::lround(position_mm.y / nu), ac = std::lround(position_mm.x / nu);
    const long off_r = ar - static_cast<long>(tool.anchor_row);
    const long off_c = ac - static_cast<long>(tool.anchor_col);
    const long rows = static_cast<long>(surface.rows()), cols = static_cast<long>(surface.cols());
    const long th = static_cast<long>(tool.depth.rows()), tw = static_cast<long>(tool.depth.cols());

    const long r0 = std::max(0L, off_r), r1 = std::min(rows, off_r + th);
    const long c0 = std::max(0L, off_c), c1 = std::min(cols, off_c + tw);
    if (r0 >= r1 || c0 >= c1) return res;

    const double ref = surface(static_cast<std::size_t>(std::clamp(ar, 0L, rows - 1)),
                               static_cast<std::size_t>(std::clamp(ac, 0L, cols - 1)));

    double sum_r = 0.0, sum_c = 0.0, count = 0.0, deepest = 0.0;
    for (long i = 0; i < th; ++i)
        for (long j = 0; j < tw; ++j)
            if (tool.in_support(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) {
                sum_r += static_cast<double>(i);
                sum_c += static_cast<double>(j);
                count += 1.0;
                deepest = std::min(deepest, tool.depth(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
            }
    if (count == 0.0) return res;
    const double cr = sum_r / count, cc = sum_c / count;

    for (long r = r0; r < r1; ++r)
        for (long c = c0; c < c1; ++c) {
            const auto ti = static_cast<std::size_t>(r - off_r), tj = static_cast<std::size_t>(c - off_c);
            if (!tool.in_support(ti, tj)) continue;
            const auto sr = static_cast<std::size_t>(r), sc = static_cast<std::size_t>(c);
            const double cut = ref + tool.depth(ti, tj);
            if (cut < res.surface(sr, sc)) {
                res.surface(sr, sc) = cut;
                res.solid(sr, sc) = 1;
                res.applied = true;
            }
        }

    // Shell: the tool support scaled by shell_shrink about its centroid.
    const double inv = 1.0 / options.shell_shrink;
    for (long r = r0; r < r1; ++r)
        for (long c = c0; c < c1; ++c) {
            const auto sr = static_cast<std::size_t>(r), sc = static_cast<std::size_t>(c);
            if (!res.solid(sr, sc)) continue;
            const long qi = std::lround(cr + (static_cast<double>(r - off_r) - cr) * inv);
            const long qj = std::lround(cc + (static_cast<double>(c - off_c) - cc) * inv);
            if (qi >= 0 && qi < th && qj >= 0 && qj < tw &&
                tool.in_support(static_cast<std::size_t>(qi), static_cast<std::size_t>(qj)))
                res.shell(sr, sc) = 1;
        }

    if (options.rim_fraction > 0.0 && res.applied) {
        // One-pixel ring just outside the support, raised by a fraction of the depth.
        const double lift = -deepest * options.rim_fraction;
        for (long r = std::max(0L, r0 - 1); r < std::min(rows, r1 + 1); ++r)
            for (long c = std::max(0L, c0 - 1); c < std::min(cols, c1 + 1); ++c) {
                auto supported = [&](long rr, long cc2) {
                    const long ti = rr - off_r, tj = cc2 - off_c;
                    return ti >= 0 && ti < th && tj >= 0 && tj < tw &&
                           tool.in_support(static_cast<std::size_t>(ti), static_cast<std::size_t>(tj));
                };
                if (supported(r, c)) continue;
                bool near = false;
                for (long dr = -1; dr <= 1 && !near; ++dr)
                    for (long dc = -1; dc <= 1 && !near; ++dc) near = supported(r + dr, c + dc);
                if (near) res.surface(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) += lift;
            }
    }
    return res;
}

}  // namespace surfsynth::defects
