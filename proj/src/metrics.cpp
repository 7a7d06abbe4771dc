// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "surfsynth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace surfsynth::metrics {

namespace {

void check_pair(const Image8& a, const Image8& b, const Mask& mask)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        fail(Errc::invalid_argument, "images differ in size");
    if (mask.rows() != a.rows() || mask.cols() != a.cols())
        fail(Errc::invalid_argument, "mask size differs from the images");
}

std::array<std::int64_t, 256> histogram(const Image8& img, const Mask& mask)
{
    std::array<std::int64_t, 256> h{};
    for (std::size_t i = 0; i < img.size(); ++i)
        if (mask.values()[i]) ++h[img.values()[i]];
    return h;
}

std::vector<double> gaussian_kernel(const SsimOptions& o)
{
    require(o.window >= 1 && o.window % 2 == 1, "SSIM window must be odd and positive");
    require(o.sigma > 0.0, "SSIM sigma must be positive");
    const int h = o.window / 2;
    std::vector<double> g(static_cast<std::size_t>(o.window));
    double sum = 0.0;
    for (int k = -h; k <= h; ++k) {
        g[static_cast<std::size_t>(k + h)] = std::exp(-0.5 * k * k / (o.sigma * o.sigma));
        sum += g[static_cast<std::size_t>(k + h)];
    }
    for (double& v : g) v /= sum;
    return g;
}

// Integral image of mask occupancy for O(1) "window fully inside" tests.
Grid<std::int64_t> mask_integral(const Mask& m)
{
    Grid<std::int64_t> s(m.rows() + 1, m.cols() + 1, 0);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            s(r + 1, c + 1) = s(r, c + 1) + s(r + 1, c) - s(r, c) + (m(r, c) ? 1 : 0);
    return s;
}

bool window_inside(const Grid<std::int64_t>& s, std::size_t r0, std::size_t c0, std::size_t n)
{
    const std::int64_t sum = s(r0 + n, c0 + n) - s(r0, c0 + n) - s(r0 + n, c0) + s(r0, c0);
    return sum == static_cast<std::int64_t>(n * n);
}

double ssim_value(double mx, double my, double xx, double yy, double xy, double c1, double c2)
{
    const double vx = xx - mx * mx, vy = yy - my * my, cxy = xy - mx * my;
    return ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
}

double finish_ssim(const std::vector<double>& row_sums, const std::vector<std::size_t>& row_counts)
{
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < row_sums.size(); ++i) {
        sum += row_sums[i];
        count += row_counts[i];
    }
    if (count == 0) fail(Errc::degenerate, "SSIM: no window lies fully inside the mask");
    return std::clamp(sum / static_cast<double>(count), 0.0, 1.0);
}

struct Pooled {
    double mean = 0.0;
    double stddev = 0.0;
    double gap = 0.0;
};

Pooled pooled_stats(const std::vector<Image8>& imgs, const std::vector<Mask>& masks)
{
    double n = 0.0, sum = 0.0, sum2 = 0.0, gaps = 0.0;
    std::size_t with_pixels = 0;
    for (std::size_t i = 0; i < imgs.size(); ++i) {
        const Mask& m = masks.size() == 1 ? masks[0] : masks[i];
        if (m.rows() != imgs[i].rows() || m.cols() != imgs[i].cols())
            fail(Errc::invalid_argument, "alignment: mask size differs from image " + std::to_string(i));
        const auto h = histogram(imgs[i], m);
        bool first = true;
        for (int g = 0; g < 256; ++g) {
            const auto cnt = static_cast<double>(h[static_cast<std::size_t>(g)]);
            if (cnt == 0.0) continue;
            if (first) {
                gaps += g;
                first = false;
            }
            n += cnt;
            sum += cnt * g;
            sum2 += cnt * g * g;
        }
        if (!first) ++with_pixels;
    }
    if (n < 2.0) fail(Errc::degenerate, "alignment: masks select fewer than two pixels");
    const double mean = sum / n;
    return {mean, std::sqrt(std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0))),
            gaps / static_cast<double>(with_pixels)};
}

}  // namespace

double hist_wd(const Image8& a, const Image8& b, const Mask& mask)
{
    check_pair(a, b, mask);
    const auto ha = histogram(a, mask), hb = histogram(b, mask);
    const std::int64_t na = std::accumulate(ha.begin(), ha.end(), std::int64_t{0});
    const std::int64_t nb = std::accumulate(hb.begin(), hb.end(), std::int64_t{0});
    if (na == 0) fail(Errc::degenerate, "hist_wd: empty mask");
    // W1 between discrete distributions on unit-spaced bins is the L1
    // distance of their CDFs; integer arithmetic keeps it exact.
    std::int64_t ca = 0, cb = 0, acc = 0;
    for (std::size_t k = 0; k < 256; ++k) {
        ca += ha[k];
        cb += hb[k];
        acc += std::abs(ca * nb - cb * na);
    }
    const double w1 = static_cast<double>(acc) / (static_cast<double>(na) * static_cast<double>(nb));
    return std::clamp(1.0 - w1 / 255.0, 0.0, 1.0);
}

double mae(const Image8& a, const Image8& b, const Mask& mask)
{
    check_pair(a, b, mask);
    std::int64_t sum = 0, n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!mask.values()[i]) continue;
        sum += std::abs(static_cast<int>(a.values()[i]) - static_cast<int>(b.values()[i]));
        ++n;
    }
    if (n == 0) fail(Errc::degenerate, "mae: empty mask");
    return std::clamp(1.0 - static_cast<double>(sum) / static_cast<double>(n) / 255.0, 0.0, 1.0);
}

double ssim(const Image8& a, const Image8& b, const Mask& mask, const SsimOptions& o, Exec exec)
{
    check_pair(a, b, mask);
    const std::vector<double> g = gaussian_kernel(o);
    const auto n = static_cast<std::size_t>(o.window);
    const std::size_t rows = a.rows(), cols = a.cols();
    if (rows < n || cols < n) fail(Errc::degenerate, "SSIM: image smaller than the window");
    const double c1 = (o.k1 * o.data_range) * (o.k1 * o.data_range);
    const double c2 = (o.k2 * o.data_range) * (o.k2 * o.data_range);
    const std::size_t vc = cols - n + 1, vr = rows - n + 1;
    const auto integral = mask_integral(mask);

    // Horizontal pass: five moment images over the valid columns.
    std::array<Grid<double>, 5> hz;
    for (auto& m : hz) m = Grid<double>(rows, vc);
    const auto irows = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static) if (is_parallel(exec))
    for (std::ptrdiff_t ri = 0; ri < irows; ++ri) {
        const auto r = static_cast<std::size_t>(ri);
        for (std::size_t c = 0; c < vc; ++c) {
            double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const double x = a(r, c + k), y = b(r, c + k), w = g[k];
                sx += w * x;
                sy += w * y;
                sxx += w * x * x;
                syy += w * y * y;
                sxy += w * x * y;
            }
            hz[0](r, c) = sx;
            hz[1](r, c) = sy;
            hz[2](r, c) = sxx;
            hz[3](r, c) = syy;
            hz[4](r, c) = sxy;
        }
    }

    std::vector<double> row_sums(vr, 0.0);
    std::vector<std::size_t> row_counts(vr, 0);
    const auto ivr = static_cast<std::ptrdiff_t>(vr);
#pragma omp parallel for schedule(static) if (is_parallel(exec))
    for (std::ptrdiff_t ri = 0; ri < ivr; ++ri) {
        const auto r = static_cast<std::size_t>(ri);
        for (std::size_t c = 0; c < vc; ++c) {
            if (!window_inside(integral, r, c, n)) continue;
            std::array<double, 5> m{};
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t q = 0; q < 5; ++q) m[q] += g[k] * hz[q](r + k, c);
            row_sums[r] += ssim_value(m[0], m[1], m[2], m[3], m[4], c1, c2);
            ++row_counts[r];
        }
    }
    return finish_ssim(row_sums, row_counts);
}

double ssim_reference(const Image8& a, const Image8& b, const Mask& mask, const SsimOptions& o)
{
    check_pair(a, b, mask);
    const std::vector<double> g = gaussian_kernel(o);
    const auto n = static_cast<std::size_t>(o.window);
    if (a.rows() < n || a.cols() < n) fail(Errc::degenerate, "SSIM: image smaller than the window");
    const double c1 = (o.k1 * o.data_range) * (o.k1 * o.data_range);
    const double c2 = (o.k2 * o.data_range) * (o.k2 * o.data_range);
    const std::size_t vr = a.rows() - n + 1, vc = a.cols() - n + 1;

    std::vector<double> row_sums(vr, 0.0);
    std::vector<std::size_t> row_counts(vr, 0);
    for (std::size_t r = 0; r < vr; ++r)
        for (std::size_t c = 0; c < vc; ++c) {
            bool inside = true;
            double mx = 0, my = 0, xx = 0, yy = 0, xy = 0;
            for (std::size_t i = 0; i < n && inside; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (!mask(r + i, c + j)) {
                        inside = false;
                        break;
                    }
                    const double w = g[i] * g[j], x = a(r + i, c + j), y = b(r + i, c + j);
                    mx += w * x;
                    my += w * y;
                    xx += w * x * x;
                    yy += w * y * y;
                    xy += w * x * y;
                }
            if (!inside) continue;
            row_sums[r] += ssim_value(mx, my, xx, yy, xy, c1, c2);
            ++row_counts[r];
        }
    return finish_ssim(row_sums, row_counts);
}

std::string to_string(Metric m)
{
    switch (m) {
    case Metric::hist_wd: return "1-HistWD";
    case Metric::mae: return "1-MAE";
    case Metric::ssim: return "SSIM";
    }
    return "unknown";
}

double similarity(Metric metric, const Image8& a, const Image8& b, const Mask& mask)
{
    switch (metric) {
    case Metric::hist_wd: return hist_wd(a, b, mask);
    case Metric::mae: return mae(a, b, mask);
    case Metric::ssim: return ssim(a, b, mask, {}, Exec::serial);
    }
    fail(Errc::invalid_argument, "unknown metric");
}

BestMatch best_match_similarity(const Image8& real, const std::vector<Image8>& instances, const Mask& mask,
                                Metric metric)
{
    require(!instances.empty(), "best_match_similarity: no synthetic instances");
    BestMatch best{similarity(metric, real, instances[0], mask), 0};
    for (std::size_t i = 1; i < instances.size(); ++i) {
        const double v = similarity(metric, real, instances[i], mask);
        if (v > best.value) best = {v, i};
    }
    return best;
}

void validate(const AlignmentParams& p)
{
    require(p.factor > 0.0, "alignment factor must be positive");
    require(p.bias >= 0 && p.bias <= 255, "alignment bias must lie in [0, 255]");
}

std::optional<AlignmentParams> preset_alignment(const std::string& texture)
{
    if (texture == "sandblasted") return AlignmentParams{0.632, 34};
    if (texture == "parallel") return AlignmentParams{1.481, 39};
    if (texture == "spiral") return AlignmentParams{1.526, 33};
    return std::nullopt;
}

AlignmentEstimate estimate_alignment(const std::vector<Image8>& real, const std::vector<Mask>& real_masks,
                                     const std::vector<Image8>& synth, const std::vector<Mask>& synth_masks,
                                     AlignmentMethod method)
{
    require(!real.empty() && !synth.empty(), "estimate_alignment: empty image set");
    require(real_masks.size() == 1 || real_masks.size() == real.size(),
            "estimate_alignment: need one real mask or one per real image");
    require(synth_masks.size() == 1 || synth_masks.size() == synth.size(),
            "estimate_alignment: need one synthetic mask or one per synthetic image");
    const Pooled r = pooled_stats(real, real_masks);
    const Pooled s = pooled_stats(synth, synth_masks);

    double factor = 0.0, offset = 0.0;
    if (method == AlignmentMethod::moments) {
        if (!(s.stddev > 0.0)) fail(Errc::degenerate, "alignment: synthetic set has no contrast");
        factor = r.stddev / s.stddev;
        offset = r.mean - factor * s.mean;
    } else {
        if (!(s.mean > s.gap)) fail(Errc::degenerate, "alignment: synthetic mean does not exceed its gap");
        factor = (r.mean - r.gap) / (s.mean - s.gap);
        offset = r.gap - factor * s.gap;
    }
    if (!(factor > 0.0)) fail(Errc::degenerate, "alignment: estimated factor is not positive");
    const int bias = static_cast<int>(std::lround(std::clamp(offset, 0.0, 255.0)));
    return {{factor, bias}, r.gap, s.gap};
}

Image8 apply_alignment(const Image8& synth, const AlignmentParams& p)
{
    validate(p);
    Image8 out(synth.rows(), synth.cols());
    for (std::size_t i = 0; i < synth.size(); ++i) {
        const double v = p.factor * synth.values()[i] + p.bias;
        out.values()[i] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
    }
    return out;
}

std::string SimilarityReport::table() const
{
    std::ostringstream os;
    char buf[64];
    os << "metric    ";
    for (const auto& t : textures) {
        std::snprintf(buf, sizeof buf, " %12s", t.texture.c_str());
        os << buf;
    }
    os << "          all\n";
    auto row = [&](const char* name, auto get) {
        std::snprintf(buf, sizeof buf, "%-10s", name);
        os << buf;
        for (const auto& t : textures) {
            std::snprintf(buf, sizeof buf, " %12.3f", get(t.values));
            os << buf;
        }
        std::snprintf(buf, sizeof buf, " %12.3f\n", get(overall));
        os << buf;
    };
    row("1-HistWD", [](const MetricValues& v) { return v.hist_wd; });
    row("1-MAE", [](const MetricValues& v) { return v.mae; });
    row("SSIM", [](const MetricValues& v) { return v.ssim; });
    os << "1-LPIPS   ";
    for (std::size_t i = 0; i <= textures.size(); ++i) {
        std::snprintf(buf, sizeof buf, " %12s", "-");
        os << buf;
    }
    os << "\n";
    return os.str();
}

SimilarityReport evaluate_similarity(const std::vector<TextureSet>& sets, Exec exec)
{
    require(!sets.empty(), "evaluate_similarity: no textures");
    SimilarityReport report;
    for (const TextureSet& ts : sets) {
        struct Query {
            const ViewpointSet* vp;
            std::size_t real;
        };
        std::vector<Query> queries;
        for (const auto& vp : ts.viewpoints) {
            require(!vp.synth.empty(), "viewpoint '" + vp.viewpoint + "' has no synthetic images");
            for (std::size_t i = 0; i < vp.real.size(); ++i) queries.push_back({&vp, i});
        }
        require(!queries.empty(), "texture '" + ts.texture + "' has no real images");

        std::vector<std::array<BestMatch, 3>> results(queries.size());
        ExceptionSlot errors;
        const auto nq = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic) if (is_parallel(exec))
        for (std::ptrdiff_t q = 0; q < nq; ++q) errors.run([&] {
            const Query& query = queries[static_cast<std::size_t>(q)];
            for (std::size_t m = 0; m < kAllMetrics.size(); ++m)
                results[static_cast<std::size_t>(q)][m] = best_match_similarity(
                    query.vp->real[query.real], query.vp->synth, query.vp->mask, kAllMetrics[m]);
        });
        errors.rethrow();

        TextureSimilarity tsim{ts.texture, {}, {}};
        for (std::size_t q = 0; q < queries.size(); ++q) {
            tsim.values.hist_wd += results[q][0].value;
            tsim.values.mae += results[q][1].value;
            tsim.values.ssim += results[q][2].value;
            tsim.matches.push_back({queries[q].vp->viewpoint, queries[q].real,
                                    {results[q][0].index, results[q][1].index, results[q][2].index}});
        }
        const auto nqd = static_cast<double>(queries.size());
        tsim.values = {tsim.values.hist_wd / nqd, tsim.values.mae / nqd, tsim.values.ssim / nqd};
        report.overall.hist_wd += tsim.values.hist_wd;
        report.overall.mae += tsim.values.mae;
        report.overall.ssim += tsim.values.ssim;
        report.textures.push_back(std::move(tsim));
    }
    const auto nt = static_cast<double>(report.textures.size());
    report.overall = {report.overall.hist_wd / nt, report.overall.mae / nt, report.overall.ssim / nt};
    return report;
}

}  // namespace surfsynth::metrics
