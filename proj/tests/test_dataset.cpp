// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "surfsynth/config_json.hpp"
#include "surfsynth/dataset.hpp"
#include "surfsynth/error.hpp"
#include "test_support.hpp"

using namespace surfsynth;
using namespace surfsynth::dataset;

TEST_SUITE("dataset")
{
    TEST_CASE("split counts")
    {
        const SplitCounts s = split_counts(30);
        CHECK(s.train == 21);
        CHECK(s.val == 3);
        CHECK(s.test == 6);
        const SplitCounts odd = split_counts(7);
        CHECK(odd.train + odd.val + odd.test == 7);
        CHECK_THROWS_AS(split_counts(2), Error);
    }

    TEST_CASE("split assignment is a seeded permutation of the counts")
    {
        const auto a = split_instances(30, 4);
        CHECK(a == split_instances(30, 4));
        CHECK(std::count(a.begin(), a.end(), Split::train) == 21);
        CHECK(std::count(a.begin(), a.end(), Split::val) == 3);
        CHECK(std::count(a.begin(), a.end(), Split::test) == 6);
    }

    TEST_CASE("parameter sampling draws from the value sets")
    {
        const TextureRandomization rand;
        const milling::MillingParams base;
        std::set<double> deltas;
        for (std::uint64_t s = 0; s < 50; ++s) {
            const milling::MillingParams p = sample_texture_params(base, rand, s);
            deltas.insert(p.delta);
            CHECK(std::find(rand.lambda.begin(), rand.lambda.end(), p.lambda) != rand.lambda.end());
            CHECK(std::find(rand.epsilon.begin(), rand.epsilon.end(), p.epsilon) != rand.epsilon.end());
            CHECK(p.d == base.d);
        }
        CHECK(deltas.size() > 3);
        const milling::MillingParams fixed = sample_texture_params(base, rand.defaults_only(), 3);
        CHECK(fixed.delta == doctest::Approx(0.09));
        CHECK(fixed.lambda == 50.0);
        CHECK(fixed.epsilon == 0.01);
    }

    TEST_CASE("block faces are outward and unit length")
    {
        const auto faces = block_faces(8.0, 6.0, 4.0);
        REQUIRE(faces.size() == 3);
        const Vec3 centre{4.0, 3.0, 2.0};
        for (const auto& nf : faces) {
            const render::Face& f = nf.face;
            const Vec3 mid = f.origin + f.u * (f.width_mm / 2.0) + f.v * (f.height_mm / 2.0);
            CHECK(dot(f.normal(), mid - centre) > 0.0);
            CHECK(length(f.normal()) == doctest::Approx(1.0));
        }
        CHECK(faces[0].name == "A");
    }

    TEST_CASE("viewpoints cycle faces before angles and look at the face")
    {
        const auto plan = viewpoint_plan(9, 3);
        REQUIRE(plan.size() == 9);
        CHECK(plan[0].face == 0);
        CHECK(plan[1].face == 1);
        CHECK(plan[3].face == 0);
        CHECK(plan[3].angle_deg == 10.0);
        const auto faces = block_faces(8.0, 6.0, 4.0);
        const render::Face& f = faces[1].face;
        const render::Pose pose = viewpoint_pose(f, 20.0, 60.0);
        CHECK(pose.orthonormal());
        CHECK(-dot(pose.forward, f.normal()) == doctest::Approx(std::cos(20.0 * 3.14159265358979 / 180.0)));
    }

    TEST_CASE("presets validate and the paper preset has full counts")
    {
        CHECK_NOTHROW(preset("desk").validate());
        const DatasetConfig paper = preset("paper");
        CHECK_NOTHROW(paper.validate());
        CHECK(paper.objects.size() == 10);
        CHECK(paper.instances_per_group == 30);
        CHECK(paper.viewpoints == 9);
        CHECK(paper.camera.width == 1224);
        CHECK_THROWS_AS(preset("warehouse"), Error);
    }

    TEST_CASE("dry run lists images without writing any")
    {
        testing::TempDir dir("dry");
        DatasetConfig c = preset("desk");
        const DatasetManifest m = generate_dataset(c, dir.path(), true);
        CHECK(m.dry_run);
        CHECK(m.images.size() == c.objects.size() * 2 * c.instances_per_group * c.viewpoints);
        CHECK(m.defective_images() * 2 == m.images.size());
        CHECK(std::filesystem::is_empty(dir.path()));
    }

    TEST_CASE("textures are reproducible per seed")
    {
        TextureConfig cfg;
        cfg.exemplar_px = 64;
        cfg.patch_px = 32;
        cfg.overlap_px = 8;
        for (Finish f : {Finish::sandblasted, Finish::parallel, Finish::spiral}) {
            const HeightField a = generate_texture(f, cfg, 40, 48, 3);
            CHECK(a == generate_texture(f, cfg, 40, 48, 3));
            CHECK(a.rows() == 40);
            CHECK(a.cols() == 48);
            CHECK(parse_finish(to_string(f)) == f);
        }
    }

    TEST_CASE("fnv1a reference values")
    {
        CHECK(fnv1a_hex({}) == "cbf29ce484222325");
        CHECK(fnv1a_hex({'a'}) == "af63dc4c8601ec8c");
    }
}

TEST_SUITE("config_json")
{
    TEST_CASE("dataset config round trips")
    {
        DatasetConfig c = preset("paper");
        c.seed = 99;
        c.texture.milling.alpha = 0.5;
        c.defect_specs[1].quantity = 7;
        const io::json j = io::to_json(c);
        DatasetConfig back = preset("desk");
        io::from_json(j, back);
        CHECK(io::to_json(back) == j);
    }

    TEST_CASE("milling params round trip")
    {
        milling::MillingParams p;
        p.path_mode = milling::PathMode::spiral;
        p.d = 8.0;
        p.b_min = 0.05;
        milling::MillingParams back;
        io::from_json(io::to_json(p), back);
        CHECK(io::to_json(back) == io::to_json(p));
        CHECK(back.path_mode == milling::PathMode::spiral);
    }

    TEST_CASE("unknown keys and bad values are rejected")
    {
        milling::MillingParams p;
        try {
            io::from_json(io::json{{"dd", 4.0}}, p);
            FAIL("expected a parse error");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::parse);
        }
        CHECK_THROWS_AS(io::from_json(io::json{{"d", "four"}}, p), Error);
        CHECK_THROWS_AS(io::from_json(io::json{{"path_mode", "zigzag"}}, p), Error);
    }

    TEST_CASE("partial defect entries start from the default row")
    {
        const auto specs = io::defect_specs_from_json(io::json::array({{{"kind", "big_dent"}, {"quantity", 1}}}));
        REQUIRE(specs.size() == 1);
        CHECK(specs[0].quantity == 1);
        CHECK(specs[0].diameter_mm.hi == defects::default_defect_specs()[1].diameter_mm.hi);
    }

    TEST_CASE("scene files load faces, height maps and labels")
    {
        testing::TempDir dir("scene");
        const io::json j = {
            {"camera", {{"width", 16}, {"height", 12}, {"pixel_size_mm", 0.05}, {"focal_length_mm", 16.0},
                        {"pose", {{"eye", {0.0, 0.0, 30.0}}, {"target", {0.0, 0.0, 0.0}}, {"up", {0.0, 1.0, 0.0}}}}}},
            {"light", {{"major_radius_mm", 10.0}, {"minor_radius_mm", 2.0}, {"radiance", 1.0}}},
            {"faces",
             io::json::array({{{"origin", {-5.0, -5.0, 0.0}}, {"u", {1.0, 0.0, 0.0}}, {"v", {0.0, 1.0, 0.0}},
                               {"width_mm", 10.0}, {"height_mm", 10.0}}})}};
        io::write_json_file(dir.path() / "scene.json", j);
        const render::Scene s = io::scene_from_json(io::read_json_file(dir.path() / "scene.json"), dir.path());
        CHECK(s.camera.width == 16);
        REQUIRE(s.faces.size() == 1);
        CHECK(s.faces[0].face.width_mm == 10.0);
        CHECK_NOTHROW(s.validate());
    }
}
