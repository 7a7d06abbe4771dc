// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "surfsynth/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>

#include "surfsynth/grid_io.hpp"
#include "surfsynth/png_io.hpp"
#include "surfsynth/rng.hpp"

namespace surfsynth::dataset {

namespace {

constexpr std::uint64_t kParamStream = 0x50415241;
constexpr std::uint64_t kTextureStream = 0x54455854;
constexpr std::uint64_t kGeometryStream = 0x47454F4D;
constexpr std::uint64_t kAssignStream = 0x41535347;
constexpr std::uint64_t kSplitStream = 0x53504C54;
constexpr std::uint64_t kRenderStream = 0x524E4452;

template <class T>
const T& pick(const std::vector<T>& set, Rng& rng)
{
    std::uniform_int_distribution<std::size_t> idx(0, set.size() - 1);
    return set[idx(rng)];
}

void check_set(const std::vector<double>& set, std::size_t def, const char* name)
{
    require(!set.empty(), std::string("randomization set '") + name + "' is empty");
    require(def < set.size(), std::string("default of randomization set '") + name + "' is not a member");
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(Errc::io, "write failed for " + path.string());
}

std::string padded(std::size_t v, int width)
{
    std::string s = std::to_string(v);
    if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
    return s;
}

// Periodic separable Gaussian smoothing.
Grid<double> smooth_periodic(const Grid<double>& in, double sigma_px)
{
    const int reach = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_px)));
    std::vector<double> kernel(static_cast<std::size_t>(2 * reach + 1));
    for (int k = -reach; k <= reach; ++k)
        kernel[static_cast<std::size_t>(k + reach)] = std::exp(-0.5 * k * k / (sigma_px * sigma_px));
    const double norm = std::accumulate(kernel.begin(), kernel.end(), 0.0);
    for (double& w : kernel) w /= norm;

    const auto rows = static_cast<std::ptrdiff_t>(in.rows()), cols = static_cast<std::ptrdiff_t>(in.cols());
    auto wrap = [](std::ptrdiff_t i, std::ptrdiff_t n) { return static_cast<std::size_t>(((i % n) + n) % n); };
    Grid<double> tmp(in.rows(), in.cols());
    for (std::ptrdiff_t r = 0; r < rows; ++r)
        for (std::ptrdiff_t c = 0; c < cols; ++c) {
            double acc = 0.0;
            for (int k = -reach; k <= reach; ++k)
                acc += kernel[static_cast<std::size_t>(k + reach)] * in(static_cast<std::size_t>(r), wrap(c + k, cols));
            tmp(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
        }
    Grid<double> out(in.rows(), in.cols());
    for (std::ptrdiff_t r = 0; r < rows; ++r)
        for (std::ptrdiff_t c = 0; c < cols; ++c) {
            double acc = 0.0;
            for (int k = -reach; k <= reach; ++k)
                acc += kernel[static_cast<std::size_t>(k + reach)] * tmp(wrap(r + k, rows), static_cast<std::size_t>(c));
            out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
        }
    return out;
}

struct FaceBake {
    std::shared_ptr<NormalMap> normals;
    std::shared_ptr<Mask> labels;
};

// Samples the texture into a face-aligned grid, then imprints the defects
// that land on this face.
FaceBake bake_face(const HeightField& texture, const NamedFace& face, const FaceTexture& assign,
                   const std::vector<defects::DefectInstance>& defect_set, std::size_t face_index,
                   const DatasetConfig& config)
{
    const double nu = config.texture.texel_mm;
    const auto cols = static_cast<std::size_t>(std::ceil(face.face.width_mm / nu)) + 2;
    const auto rows = static_cast<std::size_t>(std::ceil(face.face.height_mm / nu)) + 2;

    render::FaceBinding sampler;
    sampler.face = face.face;
    sampler.texel_mm = nu;
    sampler.rotation_deg = assign.rotation_deg;
    sampler.translation_px = assign.translation_px;

    HeightField baked(rows, cols, nu);
    const double half_cols = static_cast<double>(cols) / 2.0, half_rows = static_cast<double>(rows) / 2.0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const double s = (static_cast<double>(c) + 0.5 - half_cols) * nu + face.face.width_mm / 2.0;
            const double t = (static_cast<double>(r) + 0.5 - half_rows) * nu + face.face.height_mm / 2.0;
            const auto [tr, tc] = render::texel_at(sampler, texture.rows(), texture.cols(), s, t);
            baked(r, c) = texture(tr, tc);
        }

    auto labels = std::make_shared<Mask>(rows, cols, 0);
    for (const defects::DefectInstance& inst : defect_set) {
        if (inst.face != face_index) continue;
        const defects::ToolPatch tool = defects::build_tool(inst, nu);
        const Vec2 pos{((inst.position.x - face.face.width_mm / 2.0) / nu + half_cols - 0.5) * nu,
                       ((inst.position.y - face.face.height_mm / 2.0) / nu + half_rows - 0.5) * nu};
        defects::ImprintResult res = defects::imprint_with_masks(baked, tool, pos, config.imprint);
        if (!res.applied) continue;
        baked = std::move(res.surface);
        for (std::size_t i = 0; i < labels->size(); ++i)
            if (res.shell.values()[i]) labels->values()[i] = static_cast<std::uint8_t>(inst.label);
    }
    return {std::make_shared<NormalMap>(height_to_normal(baked)), labels};
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameter randomization

void TextureRandomization::validate() const
{
    check_set(sigma_c_mult, sigma_c_default, "sigma_c");
    check_set(delta_mult, delta_default, "delta");
    check_set(epsilon, epsilon_default, "epsilon");
    check_set(sigma_w_minus_mult, sigma_w_minus_default, "sigma_w_minus");
    check_set(sigma_lh_minus_mult, sigma_lh_minus_default, "sigma_lh_minus");
    check_set(lambda, lambda_default, "lambda");
    require(delta_unit_mm > 0.0, "delta unit must be positive");
}

TextureRandomization TextureRandomization::defaults_only() const
{
    TextureRandomization out = *this;
    out.sigma_c_mult = {sigma_c_mult.at(sigma_c_default)};
    out.delta_mult = {delta_mult.at(delta_default)};
    out.epsilon = {epsilon.at(epsilon_default)};
    out.sigma_w_minus_mult = {sigma_w_minus_mult.at(sigma_w_minus_default)};
    out.sigma_lh_minus_mult = {sigma_lh_minus_mult.at(sigma_lh_minus_default)};
    out.lambda = {lambda.at(lambda_default)};
    out.sigma_c_default = out.delta_default = out.epsilon_default = 0;
    out.sigma_w_minus_default = out.sigma_lh_minus_default = out.lambda_default = 0;
    return out;
}

milling::MillingParams sample_texture_params(const milling::MillingParams& base, const TextureRandomization& rand,
                                             std::uint64_t seed)
{
    rand.validate();
    Rng rng = make_rng(seed, kParamStream);
    milling::MillingParams p = base;
    // Draw order is fixed so that a given seed always maps to the same set.
    p.delta = pick(rand.delta_mult, rng) * rand.delta_unit_mm;
    p.sigma_c = pick(rand.sigma_c_mult, rng) * p.delta / p.conf;
    p.epsilon = pick(rand.epsilon, rng);
    p.sigma_w_minus = pick(rand.sigma_w_minus_mult, rng) / p.conf;
    p.sigma_lh_minus = pick(rand.sigma_lh_minus_mult, rng) / p.conf;
    p.lambda = pick(rand.lambda, rng);
    return p;
}

// ---------------------------------------------------------------------------
// Names

std::string to_string(Finish f)
{
    switch (f) {
    case Finish::sandblasted: return "sandblasted";
    case Finish::parallel: return "parallel";
    case Finish::spiral: return "spiral";
    }
    return "unknown";
}

Finish parse_finish(const std::string& name)
{
    if (name == "sandblasted") return Finish::sandblasted;
    if (name == "parallel") return Finish::parallel;
    if (name == "spiral") return Finish::spiral;
    fail(Errc::invalid_argument, "unknown finish '" + name + "' (expected sandblasted, parallel or spiral)");
}

std::string to_string(Split s)
{
    switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Splits

SplitCounts split_counts(std::size_t n, std::array<double, 3> ratios)
{
    require(n >= 3, "splitting needs at least 3 instances");
    for (double r : ratios) require(r >= 0.0, "split ratios must be nonnegative");
    const double total = ratios[0] + ratios[1] + ratios[2];
    require(total > 0.0, "split ratios must not all be zero");
    const auto nd = static_cast<double>(n);
    SplitCounts out;
    out.train = static_cast<std::size_t>(std::lround(nd * ratios[0] / total));
    out.val = static_cast<std::size_t>(std::lround(nd * ratios[1] / total));
    require(out.train + out.val <= n, "split rounding exceeds the instance count");
    out.test = n - out.train - out.val;
    return out;
}

std::vector<Split> split_instances(std::size_t n, std::uint64_t seed, std::array<double, 3> ratios)
{
    const SplitCounts counts = split_counts(n, ratios);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng = make_rng(seed, kSplitStream);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Split> out(n, Split::test);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < counts.train) out[order[i]] = Split::train;
        else if (i < counts.train + counts.val) out[order[i]] = Split::val;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Object and viewpoints

std::vector<NamedFace> block_faces(double length_mm, double depth_mm, double height_mm)
{
    require(length_mm > 0.0 && depth_mm > 0.0 && height_mm > 0.0, "block dimensions must be positive");
    const double L = length_mm, D = depth_mm, H = height_mm;
    std::vector<NamedFace> faces(3);
    faces[0].name = "A";
    faces[0].face = {{0.0, 0.0, H}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, L, D};
    faces[1].name = "B";
    faces[1].face = {{0.0, D, H}, {1.0, 0.0, 0.0}, {0.0, 0.0, -1.0}, L, H};
    faces[2].name = "C";
    faces[2].face = {{L, D, H}, {0.0, -1.0, 0.0}, {0.0, 0.0, -1.0}, D, H};
    return faces;
}

std::vector<Viewpoint> viewpoint_plan(std::size_t count, std::size_t face_count, const std::vector<double>& angles_deg)
{
    require(face_count > 0, "viewpoint plan needs at least one face");
    require(!angles_deg.empty(), "viewpoint plan needs at least one angle");
    require(count <= face_count * angles_deg.size(), "more viewpoints requested than face/angle pairs");
    std::vector<Viewpoint> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back({i, i % face_count, angles_deg[i / face_count]});
    return out;
}

render::Pose viewpoint_pose(const render::Face& face, double angle_deg, double distance_mm)
{
    require(distance_mm > 0.0, "focus distance must be positive");
    const Vec3 u = normalize(face.u), v = normalize(face.v), n = normalize(face.normal());
    const Vec3 center = face.origin + face.u * (face.width_mm / 2.0) + face.v * (face.height_mm / 2.0);
    const double a = angle_deg * std::numbers::pi / 180.0;
    const Vec3 dir = n * std::cos(a) + u * std::sin(a);
    return render::look_at(center + dir * distance_mm, center, v * -1.0);
}

// ---------------------------------------------------------------------------
// Configuration

void DatasetConfig::validate() const
{
    require(!objects.empty(), "dataset needs at least one object");
    require(instances_per_group >= 3, "instances_per_group must be at least 3 to form splits");
    require(viewpoints >= 1 && viewpoints <= 9, "viewpoints must lie in [1, 9]");
    require(texture_instances >= 1, "texture_instances must be positive");
    require(rotation_range_deg >= 0.0, "rotation range must be nonnegative");
    require(roughness_min > 0.0 && roughness_min <= roughness_max && roughness_max <= 1.0,
            "roughness bounds must satisfy 0 < min <= max <= 1");
    require(reflectance >= 0.0 && reflectance <= 1.0, "reflectance must lie in [0, 1]");
    require(exposure > 0.0, "exposure must be positive");
    require(texture.texel_mm > 0.0, "texel size must be positive");
    require(texture.patch_px > texture.overlap_px && texture.overlap_px > 0, "patch must exceed overlap");
    require(texture.exemplar_px >= texture.patch_px, "stand-in exemplar must cover one patch");
    require(texture.exemplar_std_mm > 0.0 && texture.exemplar_corr_px > 0.0, "stand-in exemplar needs std and correlation");
    require(render.spp >= 1 && render.bounces >= 1, "render needs spp >= 1 and bounces >= 1");
    for (const auto& spec : defect_specs) defects::validate(spec);
    milling::validate(texture.milling);
    texture.randomization.validate();
    for (double t : face_translation_px) require(t >= 0.0, "face translations must be nonnegative");
}

DatasetConfig preset(const std::string& scale)
{
    DatasetConfig c;
    c.scale = scale;
    if (scale == "desk") return c;
    if (scale == "paper") {
        c.objects.clear();
        for (std::size_t i = 0; i < 10; ++i)
            c.objects.push_back(static_cast<Finish>(i % 3));
        c.instances_per_group = 30;
        c.viewpoints = 9;
        c.texture_instances = 5;
        c.camera = {1224, 1025, 0.00345, 16.0, {}};
        c.light = {40.0, 5.0, 1.0};
        c.render = {256, 8, 0, true};
        c.focus_distance_mm = 200.0;
        c.block_length_mm = 40.0;
        c.block_depth_mm = 30.0;
        c.block_height_mm = 20.0;
        c.texture.texel_mm = 0.0061;
        c.texture.patch_px = 512;
        c.texture.overlap_px = 256;
        c.texture.exemplar_px = 1024;
        return c;
    }
    fail(Errc::invalid_argument, "unknown scale '" + scale + "' (expected desk or paper)");
}

std::size_t DatasetManifest::defective_images() const
{
    return static_cast<std::size_t>(
        std::count_if(images.begin(), images.end(), [](const ImageRecord& r) { return r.defective; }));
}

// ---------------------------------------------------------------------------
// Textures

std::string fnv1a_hex(const std::vector<std::uint8_t>& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xF];
    return out;
}

HeightField stand_in_exemplar(const TextureConfig& config, std::uint64_t seed)
{
    const std::size_t n = config.exemplar_px;
    Rng rng = make_rng(seed, kTextureStream, 0xE7);
    std::normal_distribution<double> normal(0.0, 1.0);
    Grid<double> noise(n, n);
    for (double& v : noise.values()) v = normal(rng);
    const Grid<double> smooth = smooth_periodic(noise, config.exemplar_corr_px);
    const HeightField raw(n, n, config.texel_mm, std::vector<double>(smooth.values().begin(), smooth.values().end()));
    FieldStats target;
    target.variance = config.exemplar_std_mm * config.exemplar_std_mm;
    return fit_moments(raw, target);
}

HeightField generate_texture(Finish finish, const TextureConfig& config, std::size_t rows, std::size_t cols,
                             std::uint64_t seed)
{
    if (finish == Finish::sandblasted) {
        const HeightField exemplar = config.sandblast_exemplar
                                         ? (config.sandblast_exemplar->extension() == ".xyz"
                                                ? load_topography(*config.sandblast_exemplar, TopographyFormat::xyz_ascii)
                                                : read_grid(*config.sandblast_exemplar))
                                         : stand_in_exemplar(config, seed);
        sandblast::SandblastParams p;
        p.out_rows = rows;
        p.out_cols = cols;
        p.target_spacing_mm = config.texel_mm;
        p.patch_rows = p.patch_cols = config.patch_px;
        p.overlap_px = config.overlap_px;
        p.seed = derive_seed(seed, kTextureStream, 1);
        return sandblast::generate_sandblast(exemplar, p);
    }
    milling::MillingParams p = sample_texture_params(config.milling, config.randomization, seed);
    p.path_mode = finish == Finish::spiral ? milling::PathMode::spiral : milling::PathMode::parallel;
    p.seed = derive_seed(seed, kTextureStream, 2);
    return milling::generate_milling(config.milling_stats, p, rows, cols, config.texel_mm);
}

// ---------------------------------------------------------------------------
// Orchestration

DatasetManifest generate_dataset(const DatasetConfig& config, const std::filesystem::path& out_dir, bool dry_run)
{
    config.validate();
    const std::vector<NamedFace> faces = block_faces(config.block_length_mm, config.block_depth_mm, config.block_height_mm);
    std::vector<defects::FaceExtent> extents;
    for (const NamedFace& f : faces) extents.push_back({f.face.width_mm, f.face.height_mm});

    DatasetManifest m;
    m.scale = config.scale;
    m.seed = config.seed;
    m.dry_run = dry_run;
    m.objects = config.objects;
    m.viewpoints = viewpoint_plan(config.viewpoints, faces.size());

    const std::size_t K = config.instances_per_group;
    const std::vector<Split> defective_split = split_instances(K, derive_seed(config.seed, kSplitStream, 1));
    const std::vector<Split> correct_split = split_instances(K, derive_seed(config.seed, kSplitStream, 0));

    // Instances and images, in object / group / instance / viewpoint order.
    for (std::size_t o = 0; o < config.objects.size(); ++o)
        for (int group = 1; group >= 0; --group)
            for (std::size_t k = 0; k < K; ++k) {
                InstanceRecord inst;
                inst.object = o;
                inst.defective = group == 1;
                inst.instance = std::string(inst.defective ? "d" : "c") + padded(k, 2);
                inst.geometry_id = k;
                inst.split = inst.defective ? defective_split[k] : correct_split[k];
                Rng rng = make_rng(config.seed, kAssignStream, o, 2 * k + static_cast<std::size_t>(group));
                std::uniform_real_distribution<double> rough(config.roughness_min, config.roughness_max);
                inst.roughness = rough(rng);
                std::uniform_int_distribution<std::size_t> tex(0, config.texture_instances - 1);
                std::uniform_real_distribution<double> rot(-config.rotation_range_deg, config.rotation_range_deg);
                std::uniform_real_distribution<double> dir(-std::numbers::pi, std::numbers::pi);
                for (std::size_t f = 0; f < faces.size(); ++f) {
                    FaceTexture ft;
                    ft.face = faces[f].name;
                    ft.texture_instance = tex(rng);
                    ft.rotation_deg = rot(rng);
                    const double a = dir(rng), mag = config.face_translation_px[std::min<std::size_t>(f, 2)];
                    ft.translation_px = {mag * std::cos(a), mag * std::sin(a)};
                    inst.textures.push_back(ft);
                }
                for (const Viewpoint& vp : m.viewpoints) {
                    ImageRecord img;
                    const std::string stem = "o" + padded(o, 2) + "_" + inst.instance + "_v" + padded(vp.id, 1);
                    img.image_path = "images/" + stem + ".png";
                    img.label_path = "labels/" + stem + ".png";
                    img.object = o;
                    img.instance = inst.instance;
                    img.defective = inst.defective;
                    img.geometry_id = k;
                    img.viewpoint = vp.id;
                    img.split = inst.split;
                    m.images.push_back(img);
                }
                m.instances.push_back(std::move(inst));
            }
    if (dry_run) return m;

    std::filesystem::create_directories(out_dir / "images");
    std::filesystem::create_directories(out_dir / "labels");

    // Texture instances per finish, sized to cover any face under rotation
    // and translation.
    double half_diag = 0.0;
    for (const NamedFace& f : faces) half_diag = std::max(half_diag, std::hypot(f.face.width_mm, f.face.height_mm) / 2.0);
    const double max_shift = *std::max_element(config.face_translation_px.begin(), config.face_translation_px.end());
    const auto side = static_cast<std::size_t>(std::ceil(2.0 * (half_diag / config.texture.texel_mm + max_shift + 1.0))) + 2;
    std::vector<std::vector<HeightField>> textures(3);

    // Defect geometries shared by all objects.
    std::vector<std::vector<defects::DefectInstance>> geometries(K);
    for (std::size_t k = 0; k < K; ++k)
        geometries[k] = defects::sample_defect_set(config.defect_specs, extents, defects::PositionDistribution::uniform,
                                                   derive_seed(config.seed, kGeometryStream, k));

    std::size_t next_image = 0;
    for (const InstanceRecord& inst : m.instances) {
        const std::size_t images_begin = next_image;
        next_image += m.viewpoints.size();
        const Finish finish = config.objects[inst.object];
        const auto fi = static_cast<std::size_t>(finish);
        try {
            if (textures[fi].empty())
                for (std::size_t t = 0; t < config.texture_instances; ++t)
                    textures[fi].push_back(generate_texture(finish, config.texture, side, side,
                                                            derive_seed(config.seed, kTextureStream, fi, t)));

            render::Scene scene;
            scene.camera = config.camera;
            scene.light = config.light;
            scene.exposure = config.exposure;
            static const std::vector<defects::DefectInstance> kNoDefects;
            const auto& defect_set = inst.defective ? geometries[inst.geometry_id] : kNoDefects;
            for (std::size_t f = 0; f < faces.size(); ++f) {
                const FaceTexture& ft = inst.textures[f];
                FaceBake bake = bake_face(textures[fi][ft.texture_instance], faces[f], ft, defect_set, f, config);
                render::FaceBinding b;
                b.face = faces[f].face;
                b.normal_map = std::move(bake.normals);
                b.labels = std::move(bake.labels);
                b.texel_mm = config.texture.texel_mm;
                b.roughness = inst.roughness;
                b.reflectance = config.reflectance;
                scene.faces.push_back(std::move(b));
            }

            for (std::size_t v = 0; v < m.viewpoints.size(); ++v) {
                ImageRecord& img = m.images[images_begin + v];
                try {
                    const Viewpoint& vp = m.viewpoints[v];
                    scene.camera.pose = viewpoint_pose(faces[vp.face].face, vp.angle_deg, config.focus_distance_mm);
                    render::RenderSettings rs = config.render;
                    rs.seed = derive_seed(config.seed, kRenderStream, images_begin + v);
                    const render::RenderResult rr = render::render_image(scene, rs);
                    const Image8 image = render::encode_8bit(rr.radiance, config.exposure);
                    const render::Annotation ann = render::render_annotation(scene);
                    const Mask labels = masks::filter_and_dilate_masks(image, ann.labels, config.mask_filter);
                    if (img.defective)
                        img.effectively_correct =
                            std::none_of(labels.values().begin(), labels.values().end(), [](std::uint8_t l) { return l != 0; });
                    const auto image_png = encode_png8(image);
                    const auto label_png = encode_png8(labels);
                    write_bytes(out_dir / img.image_path, image_png);
                    write_bytes(out_dir / img.label_path, label_png);
                    img.image_hash = fnv1a_hex(image_png);
                    img.label_hash = fnv1a_hex(label_png);
                } catch (const std::exception& e) {
                    m.failures.push_back({img.image_path, e.what()});
                }
            }
        } catch (const std::exception& e) {
            for (std::size_t v = 0; v < m.viewpoints.size(); ++v)
                m.failures.push_back({m.images[images_begin + v].image_path, e.what()});
        }
    }
    return m;
}

}  // namespace surfsynth::dataset
