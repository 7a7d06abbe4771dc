// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

// Times each OpenMP kernel against its serial reference and checks that both
// produce identical output. `--quick` shrinks the problem sizes.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>

#include <omp.h>

#include "surfsynth/dataset.hpp"
#include "surfsynth/metrics.hpp"
#include "surfsynth/milling.hpp"
#include "surfsynth/render.hpp"
#include "surfsynth/sandblast.hpp"

namespace {

using namespace surfsynth;

template <class F>
double seconds(F&& f, int repeats)
{
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

bool row(const char* name, const std::function<bool(Exec)>& run_and_compare, int repeats)
{
    bool same = true;
    const double ts = seconds([&] { run_and_compare(Exec::serial); }, repeats);
    const double tp = seconds([&] { same = run_and_compare(Exec::parallel); }, repeats);
    std::printf("%-12s %10.3f %10.3f %8.2fx  %s\n", name, ts, tp, ts / tp, same ? "identical" : "MISMATCH");
    return same;
}

}  // namespace

int main(int argc, char** argv)
{
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const std::size_t n = quick ? 128 : 512;
    const int repeats = quick ? 1 : 3;
    std::printf("threads: %d\n%-12s %10s %10s %9s\n", omp_get_max_threads(), "kernel", "serial s", "parallel s",
                "speedup");
    bool ok = true;

    dataset::TextureConfig tc;
    tc.texel_mm = 0.01;
    tc.exemplar_px = 128;
    const HeightField exemplar = dataset::stand_in_exemplar(tc, 1);
    sandblast::SandblastParams sp;
    sp.out_rows = sp.out_cols = n;
    sp.target_spacing_mm = 0.01;
    sp.patch_rows = sp.patch_cols = 64;
    sp.overlap_px = 16;
    const HeightField sb_ref = sandblast::generate_sandblast(exemplar, sp, Exec::serial);
    ok &= row("sandblast", [&](Exec e) { return sandblast::generate_sandblast(exemplar, sp, e) == sb_ref; }, repeats);

    milling::MillingParams mp;
    mp.d = 1.0;
    mp.seed = 2;
    const auto rings = milling::generate_tool_path(mp, n, n, 0.01);
    const HeightField mill_ref = milling::compose_rings(rings, mp, n, n, 0.01, Exec::serial);
    ok &= row("milling", [&](Exec e) { return milling::compose_rings(rings, mp, n, n, 0.01, e) == mill_ref; },
              repeats);

    render::Scene scene;
    const int w = quick ? 64 : 256;
    scene.camera = {w, w, 0.02, 16.0, render::look_at({0.0, 0.0, 60.0}, {0.0, 0.0, 0.0}, {0.0, 1.0, 0.0})};
    scene.light = {10.0, 2.0, 1.0};
    render::FaceBinding fb;
    fb.face = {{-15.0, -15.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, 30.0, 30.0};
    scene.faces = {fb};
    const render::RenderSettings rs{quick ? 4 : 32, 2, 3, true};
    const GrayImage ren_ref = render::render_image(scene, rs, Exec::serial).radiance;
    ok &= row("render", [&](Exec e) { return render::render_image(scene, rs, e).radiance == ren_ref; }, repeats);

    Image8 a(n, n), b(n, n);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a.values()[i] = static_cast<std::uint8_t>((i * 7919) % 251);
        b.values()[i] = static_cast<std::uint8_t>((i * 104729) % 241);
    }
    const Mask mask(n, n, 1);
    const double ssim_ref = metrics::ssim(a, b, mask, {}, Exec::serial);
    ok &= row("ssim", [&](Exec e) { return metrics::ssim(a, b, mask, {}, e) == ssim_ref; }, repeats);

    return ok ? 0 : 1;
}
