// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "surfsynth/error.hpp"
#include "surfsynth/milling.hpp"

using namespace surfsynth;
using namespace surfsynth::milling;

namespace {

MillingParams small(PathMode mode)
{
    MillingParams p;
    p.d = 0.8;
    p.delta = 0.06;
    p.path_mode = mode;
    p.seed = 13;
    return p;
}

}  // namespace

TEST_SUITE("milling")
{
    TEST_CASE("path spacing")
    {
        MillingParams p;
        p.d = 8.0;
        p.alpha = 0.5;
        p.gamma = 0.04;
        CHECK(p.path_spacing() == doctest::Approx(0.54 * 8.0));
    }

    TEST_CASE("centers_on_segment")
    {
        CHECK(centers_on_segment(0.0, 0.1) == 1);
        CHECK(centers_on_segment(1.0, 0.1) == 11);
        CHECK_THROWS_AS(centers_on_segment(1.0, 0.0), Error);
    }

    TEST_CASE("validate rejects out-of-range parameters")
    {
        MillingParams p;
        p.alpha = 1.5;
        CHECK_THROWS_AS(validate(p), Error);
        p = MillingParams{};
        p.a_min = 0.5;
        p.a_max = 0.2;
        CHECK_THROWS_AS(validate(p), Error);
        p = MillingParams{};
        p.epsilon = -0.1;
        CHECK_THROWS_AS(validate(p), Error);
        CHECK_NOTHROW(validate(MillingParams{}));
    }

    TEST_CASE("ring shape against the analytic profile")
    {
        RingInstance ring;
        ring.radius = 1.0;
        ring.w_minus = 0.1;
        ring.w_plus_i = 0.05;
        ring.w_plus_o = 0.04;
        for (int k = 0; k <= 400; ++k) {
            const double r = 0.8 + 0.4 * k / 400.0;
            CHECK(ring_shape(ring, r) == doctest::Approx(oracle::ring_profile(r, 1.0, 0.1, 0.05, 0.04)).epsilon(1e-12));
        }
        CHECK(ring_shape(ring, 0.95) == doctest::Approx(-1.0));
        CHECK(ring_shape(ring, 0.5) == 0.0);
    }

    TEST_CASE("tilt scales the front and back of a ring")
    {
        RingInstance ring;
        ring.center = {0.0, 0.0};
        ring.radius = 1.0;
        ring.w_minus = 0.1;
        ring.phi = 0.0;
        ring.tilt_minus = {0.5, 1.0};
        const double r = 0.95;
        const RingSample front = evaluate_ring(ring, 0.0, {r, 0.0});
        const RingSample back = evaluate_ring(ring, 0.0, {-r, 0.0});
        CHECK(front.value == doctest::Approx(-0.5));
        CHECK(back.value == doctest::Approx(-1.0));
    }

    TEST_CASE("interaction weight runs from a at the front to b at the back")
    {
        RingInstance ring;
        ring.radius = 1.0;
        ring.w_minus = 0.1;
        ring.a = 0.1;
        ring.b = 0.4;
        CHECK(evaluate_ring(ring, 0.0, {0.95, 0.0}).weight == doctest::Approx(0.1));
        CHECK(evaluate_ring(ring, 0.0, {-0.95, 0.0}).weight == doctest::Approx(0.4));
        CHECK(evaluate_ring(ring, 0.0, {0.0, 0.95}).weight == doctest::Approx(0.25));
        CHECK_FALSE(evaluate_ring(ring, 0.0, {0.0, 0.0}).inside);
    }

    TEST_CASE("zero noise amplitude ignores noise terms")
    {
        RingInstance ring;
        ring.radius = 1.0;
        ring.w_minus = 0.1;
        ring.noise = {{3, 0.2}, {7, -1.0}};
        for (double t = 0.0; t < 6.0; t += 0.37) {
            const Vec2 pt{0.95 * std::cos(t), 0.95 * std::sin(t)};
            CHECK(evaluate_ring(ring, 0.0, pt).value == doctest::Approx(-1.0));
        }
    }

    TEST_CASE("tool path covers the field")
    {
        for (PathMode mode : {PathMode::parallel, PathMode::spiral}) {
            const MillingParams p = small(mode);
            const auto rings = generate_tool_path(p, 60, 80, 0.01);
            REQUIRE(!rings.empty());
            for (std::size_t r = 0; r < 60; r += 7)
                for (std::size_t c = 0; c < 80; c += 7) {
                    const Vec2 pt{static_cast<double>(c) * 0.01, static_cast<double>(r) * 0.01};
                    const bool covered = std::any_of(rings.begin(), rings.end(), [&](const RingInstance& ring) {
                        return length(pt - ring.center) <= ring.outer_radius();
                    });
                    CHECK(covered);
                }
        }
    }

    TEST_CASE("order flips walk forward through the path")
    {
        MillingParams p = small(PathMode::parallel);
        p.sigma_c = 0.0;
        p.epsilon = 0.0;
        const auto base = generate_tool_path(p, 40, 40, 0.01);
        p.epsilon = 1.0;
        const auto flipped = generate_tool_path(p, 40, 40, 0.01);
        REQUIRE(base.size() == flipped.size());
        const std::size_t n = base.size();
        for (std::size_t k = 0; k + 1 < n; ++k) CHECK(flipped[k].center == base[k + 1].center);
        CHECK(flipped[n - 1].center == base[0].center);
        for (std::size_t k = 0; k < n; ++k) CHECK(flipped[k].order_index == k);
    }

    TEST_CASE("compose_rings: serial and parallel are identical")
    {
        for (PathMode mode : {PathMode::parallel, PathMode::spiral}) {
            const MillingParams p = small(mode);
            const auto rings = generate_tool_path(p, 50, 70, 0.01);
            const HeightField a = compose_rings(rings, p, 50, 70, 0.01, Exec::serial);
            const HeightField b = compose_rings(rings, p, 50, 70, 0.01, Exec::parallel);
            CHECK(a == b);
        }
    }

    TEST_CASE("generate_milling matches the measurement moments")
    {
        const FieldStats target{0.001, 0.002 * 0.002, 0.0, 0.0};
        const HeightField f = generate_milling(target, small(PathMode::parallel), 40, 50, 0.01);
        const FieldStats s = compute_stats(f);
        CHECK(s.mean == doctest::Approx(0.001).epsilon(1e-9));
        CHECK(s.stddev() == doctest::Approx(0.002).epsilon(1e-9));
        CHECK(f == generate_milling(target, small(PathMode::parallel), 40, 50, 0.01, Exec::serial));
    }

    TEST_CASE("interaction weights stay in the unit interval")
    {
        MillingParams p = small(PathMode::spiral);
        p.a_min = 0.0;
        p.a_max = 1.0;
        p.b_min = 0.0;
        p.b_max = 1.0;
        for (const auto& ring : generate_tool_path(p, 30, 30, 0.01)) {
            const RingPatch patch = ring_field(ring, p, 30, 30, 0.01);
            for (double w : patch.weights.values()) {
                CHECK(w >= 0.0);
                CHECK(w <= 1.0);
            }
        }
    }

    TEST_CASE("flips keep every ring exactly once")
    {
        MillingParams p = small(PathMode::spiral);
        p.epsilon = 0.3;
        const auto flipped = generate_tool_path(p, 40, 40, 0.01);
        p.epsilon = 0.0;
        const auto base = generate_tool_path(p, 40, 40, 0.01);
        REQUIRE(flipped.size() == base.size());
        std::vector<std::pair<double, double>> a, b;
        for (const auto& r : base) a.emplace_back(r.center.x, r.center.y);
        for (const auto& r : flipped) b.emplace_back(r.center.x, r.center.y);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }

    TEST_CASE("three-sigma rule keeps sampled widths in range")
    {
        MillingParams p;
        p.d = 0.4;
        p.delta = 0.002;
        p.lambda = 0.0;
        p.seed = 21;
        const auto rings = generate_tool_path(p, 20, 500, 0.01);
        REQUIRE(rings.size() >= 10000);
        const double half = 3.0 * p.sigma_w_minus;
        std::size_t inside = 0;
        for (const auto& r : rings) inside += std::abs(r.w_minus - p.mu_w_minus) <= half ? 1 : 0;
        CHECK(static_cast<double>(inside) / static_cast<double>(rings.size()) >= 0.99);
    }

    TEST_CASE("spiral center looks different from the annulus")
    {
        MillingParams p;
        p.d = 0.6;
        p.alpha = 0.5;
        p.delta = 0.02;
        p.path_mode = PathMode::spiral;
        p.seed = 5;
        const std::size_t n = 240;
        const HeightField f = generate_milling({0.0, 1e-6, 0.0, 0.0}, p, n, n, 0.01);
        auto local_var = [&](std::size_t r0, std::size_t c0) {
            double s = 0.0, s2 = 0.0;
            for (std::size_t r = r0; r < r0 + 30; ++r)
                for (std::size_t c = c0; c < c0 + 30; ++c) {
                    s += f(r, c);
                    s2 += f(r, c) * f(r, c);
                }
            const double m = s / 900.0;
            return s2 / 900.0 - m * m;
        };
        const double centre = local_var(n / 2 - 15, n / 2 - 15);
        const double annulus = local_var(n / 2 - 15, n / 2 + 50);
        CHECK(std::abs(centre - annulus) > 0.1 * std::max(centre, annulus));
    }
}
