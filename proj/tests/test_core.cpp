// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "oracles.hpp"
#include "surfsynth/error.hpp"
#include "surfsynth/fft.hpp"
#include "surfsynth/grid.hpp"
#include "surfsynth/grid_io.hpp"
#include "surfsynth/png_io.hpp"
#include "surfsynth/rng.hpp"
#include "test_support.hpp"

using namespace surfsynth;

TEST_SUITE("core")
{
    TEST_CASE("fft matches the direct DFT on odd and even sizes")
    {
        for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{8, 8}, {7, 12}, {9, 5}}) {
            const HeightField hf = testing::noise_field(rows, cols, 1.0, rows * 31 + cols);
            const Spectrum s = fft_forward(hf.grid());
            const auto ref = oracle::naive_dft(hf.grid());
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t k = 0; k < s.half_cols(); ++k) {
                    CHECK(s(r, k).real() == doctest::Approx(ref(r, k).real()).epsilon(1e-10));
                    CHECK(s(r, k).imag() == doctest::Approx(ref(r, k).imag()).epsilon(1e-10));
                }
            const Grid<double> back = fft_inverse(s);
            for (std::size_t i = 0; i < back.size(); ++i) CHECK(back.values()[i] == doctest::Approx(hf.values()[i]));
        }
    }

    TEST_CASE("grid rejects mismatched data")
    {
        CHECK_THROWS_AS(Grid<double>(2, 3, std::vector<double>(5)), Error);
    }

    TEST_CASE("compute_stats uses the unbiased variance")
    {
        const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
        const FieldStats s = compute_stats(v);
        CHECK(s.mean == 2.5);
        CHECK(s.variance == doctest::Approx(5.0 / 3.0));
        CHECK(s.min == 1.0);
        CHECK(s.max == 4.0);
    }

    TEST_CASE("fit_moments hits the target and the printed variant does not")
    {
        const HeightField pre = testing::noise_field(30, 40, 0.01, 3, 5.0);
        const FieldStats target{0.25, 0.04, 0.0, 0.0};
        const FieldStats got = compute_stats(fit_moments(pre, target));
        CHECK(got.mean == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(got.stddev() == doctest::Approx(0.2).epsilon(1e-12));
        const FieldStats printed = compute_stats(fit_moments(pre, target, MomentFormula::strict_printed));
        CHECK(std::abs(printed.stddev() - 0.2) > 1e-3);
    }

    TEST_CASE("fit_moments rejects a constant field")
    {
        const HeightField flat(4, 4, 0.01, 1.0);
        CHECK_THROWS_AS(fit_moments(flat, {0.0, 1.0, 0.0, 0.0}), Error);
    }

    TEST_CASE("resample_nearest picks the source cell under each output center")
    {
        HeightField src(4, 4, 1.0);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c) src(r, c) = static_cast<double>(10 * r + c);
        const HeightField out = resample_nearest(src, 2.0);
        REQUIRE(out.rows() == 2);
        REQUIRE(out.cols() == 2);
        CHECK(out(0, 0) == 11.0);
        CHECK(out(1, 1) == 33.0);
        CHECK(out.spacing_mm() == 2.0);
    }

    TEST_CASE("height_to_normal of a tilted plane is constant")
    {
        HeightField hf(6, 7, 0.5);
        for (std::size_t r = 0; r < 6; ++r)
            for (std::size_t c = 0; c < 7; ++c) hf(r, c) = 0.25 * static_cast<double>(c) * 0.5;
        const NormalMap n = height_to_normal(hf);
        const Vec3 expect = normalize(Vec3{-0.25, 0.0, 1.0});
        for (const Vec3& v : n.values()) {
            CHECK(v.x == doctest::Approx(expect.x));
            CHECK(v.y == doctest::Approx(0.0));
            CHECK(v.z == doctest::Approx(expect.z));
        }
    }

    TEST_CASE("derive_seed separates keys and CounterRng is reproducible")
    {
        CHECK(derive_seed(1, 0) != derive_seed(1, 1));
        CHECK(derive_seed(1, 0, 1) != derive_seed(1, 1, 0));
        CounterRng a(42), b(42);
        for (int i = 0; i < 100; ++i) {
            const double x = a.next();
            CHECK(x == b.next());
            CHECK(x >= 0.0);
            CHECK(x < 1.0);
        }
    }

    TEST_CASE("png round trips")
    {
        testing::TempDir dir("png");
        const Image8 img = testing::noise_image(13, 17, 5);
        write_png8(dir.path() / "a.png", img);
        CHECK(read_png8(dir.path() / "a.png") == img);
        CHECK(encode_png8(img) == encode_png8(img));

        Grid<std::uint16_t> wide(5, 9);
        for (std::size_t i = 0; i < wide.size(); ++i) wide.values()[i] = static_cast<std::uint16_t>(i * 4099);
        write_png16(dir.path() / "b.png", wide);
        CHECK(read_png16(dir.path() / "b.png") == wide);
        CHECK_THROWS_AS(read_png8(dir.path() / "missing.png"), Error);
    }

    TEST_CASE("grid container keeps float precision")
    {
        testing::TempDir dir("grid");
        const HeightField hf = testing::noise_field(11, 6, 0.0061, 9, 0.003);
        write_grid(dir.path() / "h.synh", hf);
        const HeightField back = read_grid(dir.path() / "h.synh");
        REQUIRE(back.rows() == 11);
        REQUIRE(back.cols() == 6);
        CHECK(back.spacing_mm() == 0.0061);
        for (std::size_t i = 0; i < hf.size(); ++i)
            CHECK(back.values()[i] == static_cast<double>(static_cast<float>(hf.values()[i])));
    }

    TEST_CASE("xyz files round trip and report the bad row")
    {
        testing::TempDir dir("xyz");
        const HeightField hf = testing::noise_field(5, 4, 0.002, 10, 0.001);
        write_xyz(dir.path() / "h.xyz", hf);
        const HeightField back = load_topography(dir.path() / "h.xyz", TopographyFormat::xyz_ascii);
        CHECK(back == hf);

        std::ofstream(dir.path() / "bad.xyz") << "0 0 1\n2 0 1\nnot a row\n";
        try {
            load_topography(dir.path() / "bad.xyz", TopographyFormat::xyz_ascii);
            FAIL("expected a parse error");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::parse);
            REQUIRE(e.row().has_value());
            CHECK(*e.row() == 2);
        }
    }

    TEST_CASE("16-bit height png round trips within one quantization step")
    {
        testing::TempDir dir("png16");
        const HeightField hf = testing::noise_field(8, 8, 0.01, 12, 0.002);
        write_height_png16(dir.path() / "h.png", hf);
        const HeightField back = read_height_png16(dir.path() / "h.png");
        const FieldStats s = compute_stats(hf);
        const double step = (s.max - s.min) / 65535.0;
        for (std::size_t i = 0; i < hf.size(); ++i) CHECK(std::abs(back.values()[i] - hf.values()[i]) <= step);
        CHECK(back.spacing_mm() == 0.01);
    }

    TEST_CASE("resample_nearest never invents values")
    {
        const HeightField src = testing::noise_field(37, 29, 0.003, 14);
        const HeightField out = resample_nearest(src, 0.0071);
        const std::vector<double> pool(src.values().begin(), src.values().end());
        for (double v : out.values()) CHECK(std::find(pool.begin(), pool.end(), v) != pool.end());
    }

    TEST_CASE("normals ignore a constant height offset")
    {
        HeightField hf = testing::noise_field(12, 14, 0.01, 15, 0.002);
        const NormalMap a = height_to_normal(hf);
        for (double& v : hf.values()) v += 0.75;
        const NormalMap b = height_to_normal(hf);
        for (std::size_t r = 0; r < 12; ++r)
            for (std::size_t c = 0; c < 14; ++c) {
                CHECK(a(r, c).x == doctest::Approx(b(r, c).x).epsilon(1e-9));
                CHECK(a(r, c).y == doctest::Approx(b(r, c).y).epsilon(1e-9));
            }
    }

    TEST_CASE("fit_moments is idempotent")
    {
        const HeightField pre = testing::noise_field(25, 25, 0.01, 16, 3.0);
        const FieldStats target{-0.002, 0.0005 * 0.0005, 0.0, 0.0};
        const HeightField once = fit_moments(pre, target);
        const HeightField twice = fit_moments(once, target);
        for (std::size_t i = 0; i < once.size(); ++i)
            CHECK(std::abs(once.values()[i] - twice.values()[i]) <= 1e-9 * 0.0005);
    }

    TEST_CASE("grid container is the identity on float-representable heights")
    {
        testing::TempDir dir("grid_id");
        HeightField hf = testing::noise_field(9, 10, 0.004, 17, 0.01);
        for (double& v : hf.values()) v = static_cast<double>(static_cast<float>(v));
        write_grid(dir.path() / "h.synh", hf);
        CHECK(read_grid(dir.path() / "h.synh") == hf);
    }
}
