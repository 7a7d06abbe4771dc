// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "surfsynth/config_json.hpp"

#include <fstream>
#include <set>
#include <string>

#include "surfsynth/grid_io.hpp"
#include "surfsynth/png_io.hpp"

namespace surfsynth::io {

namespace {

// Reads the keys of one JSON object and rejects the ones nobody asked for.
class Fields {
public:
    Fields(const json& j, std::string context) : j_(j), context_(std::move(context))
    {
        if (!j_.is_object()) fail(Errc::parse, context_ + ": expected a JSON object");
    }

    template <class T>
    void get(const char* key, T& out)
    {
        const auto it = j_.find(key);
        if (it == j_.end()) return;
        seen_.insert(key);
        try {
            out = it->get<T>();
        } catch (const json::exception& e) {
            fail(Errc::parse, context_ + "." + key + ": " + e.what());
        }
    }

    const json* sub(const char* key)
    {
        const auto it = j_.find(key);
        if (it == j_.end()) return nullptr;
        seen_.insert(key);
        return &*it;
    }

    std::string path(const char* key) const { return context_ + "." + key; }

    void finish() const
    {
        for (const auto& item : j_.items())
            if (!seen_.count(item.key())) fail(Errc::parse, context_ + ": unknown key '" + item.key() + "'");
    }

private:
    const json& j_;
    std::string context_;
    std::set<std::string> seen_;
};

Vec3 vec3(const json& j, const std::string& context)
{
    if (!j.is_array() || j.size() != 3) fail(Errc::parse, context + ": expected [x, y, z]");
    try {
        return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    } catch (const json::exception& e) {
        fail(Errc::parse, context + ": " + e.what());
    }
}

defects::Range range(const json& j, const std::string& context)
{
    if (!j.is_array() || j.size() != 2) fail(Errc::parse, context + ": expected [lo, hi]");
    try {
        return {j[0].get<double>(), j[1].get<double>()};
    } catch (const json::exception& e) {
        fail(Errc::parse, context + ": " + e.what());
    }
}

json to_json(defects::Range r) { return json::array({r.lo, r.hi}); }

// Converts library argument errors on enum names into parse errors.
template <class F>
auto parse_name(const std::string& context, F&& parse)
{
    try {
        return parse();
    } catch (const Error& e) {
        fail(Errc::parse, context + ": " + e.what());
    }
}

json to_json(const render::PinholeCamera& c)
{
    return {{"width", c.width}, {"height", c.height}, {"pixel_size_mm", c.pixel_size_mm},
            {"focal_length_mm", c.focal_length_mm}};
}

void camera_from_json(const json& j, render::PinholeCamera& c, const std::string& context, bool allow_pose)
{
    Fields f(j, context);
    f.get("width", c.width);
    f.get("height", c.height);
    f.get("pixel_size_mm", c.pixel_size_mm);
    f.get("focal_length_mm", c.focal_length_mm);
    if (allow_pose) {
        if (const json* p = f.sub("pose")) {
            Fields pf(*p, f.path("pose"));
            const json* eye = pf.sub("eye");
            const json* target = pf.sub("target");
            if (!eye || !target) fail(Errc::parse, f.path("pose") + ": needs eye and target");
            Vec3 up{0.0, -1.0, 0.0};
            if (const json* u = pf.sub("up")) up = vec3(*u, pf.path("up"));
            pf.finish();
            c.pose = render::look_at(vec3(*eye, pf.path("eye")), vec3(*target, pf.path("target")), up);
        }
    }
    f.finish();
}

json to_json(const render::RingLight& l)
{
    return {{"major_radius_mm", l.major_radius_mm}, {"minor_radius_mm", l.minor_radius_mm}, {"radiance", l.radiance}};
}

void light_from_json(const json& j, render::RingLight& l, const std::string& context)
{
    Fields f(j, context);
    f.get("major_radius_mm", l.major_radius_mm);
    f.get("minor_radius_mm", l.minor_radius_mm);
    f.get("radiance", l.radiance);
    f.finish();
}

}  // namespace

// ---------------------------------------------------------------------------

json to_json(const milling::MillingParams& p)
{
    return {{"conf", p.conf},
            {"d", p.d},
            {"alpha", p.alpha},
            {"gamma", p.gamma},
            {"delta", p.delta},
            {"sigma_c", p.sigma_c},
            {"epsilon", p.epsilon},
            {"path_mode", p.path_mode == milling::PathMode::spiral ? "spiral" : "parallel"},
            {"mu_w_minus", p.mu_w_minus},
            {"sigma_w_minus", p.sigma_w_minus},
            {"mu_w_plus_i", p.mu_w_plus_i},
            {"sigma_w_plus_i", p.sigma_w_plus_i},
            {"mu_w_plus_o", p.mu_w_plus_o},
            {"sigma_w_plus_o", p.sigma_w_plus_o},
            {"mu_l_minus", p.mu_l_minus},
            {"mu_h_minus", p.mu_h_minus},
            {"sigma_lh_minus", p.sigma_lh_minus},
            {"mu_l_plus_i", p.mu_l_plus_i},
            {"mu_h_plus_i", p.mu_h_plus_i},
            {"sigma_lh_plus_i", p.sigma_lh_plus_i},
            {"mu_l_plus_o", p.mu_l_plus_o},
            {"mu_h_plus_o", p.mu_h_plus_o},
            {"sigma_lh_plus_o", p.sigma_lh_plus_o},
            {"lambda", p.lambda},
            {"tau", p.tau},
            {"noise_amp", p.noise_amp},
            {"a", json::array({p.a_min, p.a_max})},
            {"b", json::array({p.b_min, p.b_max})},
            {"seed", p.seed}};
}

void from_json(const json& j, milling::MillingParams& p)
{
    Fields f(j, "milling");
    f.get("conf", p.conf);
    f.get("d", p.d);
    f.get("alpha", p.alpha);
    f.get("gamma", p.gamma);
    f.get("delta", p.delta);
    f.get("sigma_c", p.sigma_c);
    f.get("epsilon", p.epsilon);
    std::string mode = p.path_mode == milling::PathMode::spiral ? "spiral" : "parallel";
    f.get("path_mode", mode);
    if (mode == "parallel") p.path_mode = milling::PathMode::parallel;
    else if (mode == "spiral") p.path_mode = milling::PathMode::spiral;
    else fail(Errc::parse, "milling.path_mode: expected parallel or spiral, got '" + mode + "'");
    f.get("mu_w_minus", p.mu_w_minus);
    f.get("sigma_w_minus", p.sigma_w_minus);
    f.get("mu_w_plus_i", p.mu_w_plus_i);
    f.get("sigma_w_plus_i", p.sigma_w_plus_i);
    f.get("mu_w_plus_o", p.mu_w_plus_o);
    f.get("sigma_w_plus_o", p.sigma_w_plus_o);
    f.get("mu_l_minus", p.mu_l_minus);
    f.get("mu_h_minus", p.mu_h_minus);
    f.get("sigma_lh_minus", p.sigma_lh_minus);
    f.get("mu_l_plus_i", p.mu_l_plus_i);
    f.get("mu_h_plus_i", p.mu_h_plus_i);
    f.get("sigma_lh_plus_i", p.sigma_lh_plus_i);
    f.get("mu_l_plus_o", p.mu_l_plus_o);
    f.get("mu_h_plus_o", p.mu_h_plus_o);
    f.get("sigma_lh_plus_o", p.sigma_lh_plus_o);
    f.get("lambda", p.lambda);
    f.get("tau", p.tau);
    f.get("noise_amp", p.noise_amp);
    if (const json* a = f.sub("a")) {
        const auto r = range(*a, "milling.a");
        p.a_min = r.lo;
        p.a_max = r.hi;
    }
    if (const json* b = f.sub("b")) {
        const auto r = range(*b, "milling.b");
        p.b_min = r.lo;
        p.b_max = r.hi;
    }
    f.get("seed", p.seed);
    f.finish();
}

json to_json(const sandblast::SandblastParams& p)
{
    return {{"out_rows", p.out_rows},
            {"out_cols", p.out_cols},
            {"target_spacing_mm", p.target_spacing_mm},
            {"patch_rows", p.patch_rows},
            {"patch_cols", p.patch_cols},
            {"overlap_px", p.overlap_px},
            {"generator", p.generator == sandblast::Generator::rpn ? "rpn" : "adsn"},
            {"seed", p.seed}};
}

void from_json(const json& j, sandblast::SandblastParams& p)
{
    Fields f(j, "sandblast");
    f.get("out_rows", p.out_rows);
    f.get("out_cols", p.out_cols);
    f.get("target_spacing_mm", p.target_spacing_mm);
    f.get("patch_rows", p.patch_rows);
    f.get("patch_cols", p.patch_cols);
    f.get("overlap_px", p.overlap_px);
    std::string gen = p.generator == sandblast::Generator::rpn ? "rpn" : "adsn";
    f.get("generator", gen);
    if (gen == "adsn") p.generator = sandblast::Generator::adsn;
    else if (gen == "rpn") p.generator = sandblast::Generator::rpn;
    else fail(Errc::parse, "sandblast.generator: expected adsn or rpn, got '" + gen + "'");
    f.get("seed", p.seed);
    f.finish();
}

json to_json(const defects::DefectSpec& s)
{
    json j{{"kind", defects::to_string(s.kind)},
           {"quantity", s.quantity},
           {"diameter_mm", to_json(s.diameter_mm)}};
    if (defects::is_scratch(s.kind)) {
        j["path_length_mm"] = to_json(s.path_length_mm);
        j["step_size_mm"] = s.step_size_mm;
        j["curviness"] = s.curviness;
    } else {
        j["elongation"] = to_json(s.elongation);
        j["depth_mm"] = to_json(s.depth_mm);
    }
    return j;
}

void from_json(const json& j, defects::DefectSpec& s)
{
    Fields f(j, "defect");
    std::string kind = defects::to_string(s.kind);
    f.get("kind", kind);
    s.kind = parse_name("defect.kind", [&] { return defects::parse_defect_kind(kind); });
    f.get("quantity", s.quantity);
    if (const json* r = f.sub("diameter_mm")) s.diameter_mm = range(*r, "defect.diameter_mm");
    if (const json* r = f.sub("elongation")) s.elongation = range(*r, "defect.elongation");
    if (const json* r = f.sub("depth_mm")) s.depth_mm = range(*r, "defect.depth_mm");
    if (const json* r = f.sub("path_length_mm")) s.path_length_mm = range(*r, "defect.path_length_mm");
    f.get("step_size_mm", s.step_size_mm);
    f.get("curviness", s.curviness);
    f.finish();
}

std::vector<defects::DefectSpec> defect_specs_from_json(const json& j)
{
    if (!j.is_array()) fail(Errc::parse, "defects: expected an array of defect specs");
    const std::vector<defects::DefectSpec> defaults = defects::default_defect_specs();
    std::vector<defects::DefectSpec> out;
    for (const json& item : j) {
        // Start from the table row of the named kind so entries may be partial.
        defects::DefectSpec spec;
        if (item.is_object() && item.contains("kind") && item["kind"].is_string()) {
            const auto kind = parse_name("defect.kind", [&] { return defects::parse_defect_kind(item["kind"]); });
            for (const auto& d : defaults)
                if (d.kind == kind) spec = d;
        }
        from_json(item, spec);
        defects::validate(spec);
        out.push_back(spec);
    }
    return out;
}

json to_json(const defects::DefectInstance& d)
{
    json j{{"kind", defects::to_string(d.kind)},
           {"label", static_cast<int>(d.label)},
           {"face", d.face},
           {"position_mm", json::array({d.position.x, d.position.y})},
           {"diameter_mm", d.diameter_mm},
           {"rotation_rad", d.rotation_rad}};
    if (defects::is_scratch(d.kind)) {
        j["path_length_mm"] = d.path_length_mm;
        j["step_size_mm"] = d.step_size_mm;
        j["curviness"] = d.curviness;
        j["walk_seed"] = d.walk_seed;
    } else {
        j["elongation"] = d.elongation;
        j["depth_mm"] = d.depth_mm;
    }
    return j;
}

json to_json(const dataset::TextureRandomization& r)
{
    return {{"sigma_c_mult", r.sigma_c_mult},
            {"delta_mult", r.delta_mult},
            {"epsilon", r.epsilon},
            {"sigma_w_minus_mult", r.sigma_w_minus_mult},
            {"sigma_lh_minus_mult", r.sigma_lh_minus_mult},
            {"lambda", r.lambda},
            {"delta_unit_mm", r.delta_unit_mm},
            {"defaults",
             {{"sigma_c", r.sigma_c_default},
              {"delta", r.delta_default},
              {"epsilon", r.epsilon_default},
              {"sigma_w_minus", r.sigma_w_minus_default},
              {"sigma_lh_minus", r.sigma_lh_minus_default},
              {"lambda", r.lambda_default}}}};
}

void from_json(const json& j, dataset::TextureRandomization& r)
{
    Fields f(j, "randomization");
    f.get("sigma_c_mult", r.sigma_c_mult);
    f.get("delta_mult", r.delta_mult);
    f.get("epsilon", r.epsilon);
    f.get("sigma_w_minus_mult", r.sigma_w_minus_mult);
    f.get("sigma_lh_minus_mult", r.sigma_lh_minus_mult);
    f.get("lambda", r.lambda);
    f.get("delta_unit_mm", r.delta_unit_mm);
    if (const json* d = f.sub("defaults")) {
        Fields df(*d, "randomization.defaults");
        df.get("sigma_c", r.sigma_c_default);
        df.get("delta", r.delta_default);
        df.get("epsilon", r.epsilon_default);
        df.get("sigma_w_minus", r.sigma_w_minus_default);
        df.get("sigma_lh_minus", r.sigma_lh_minus_default);
        df.get("lambda", r.lambda_default);
        df.finish();
    }
    f.finish();
}

json to_json(const dataset::DatasetConfig& c)
{
    json objects = json::array();
    for (auto o : c.objects) objects.push_back(dataset::to_string(o));
    json specs = json::array();
    for (const auto& s : c.defect_specs) specs.push_back(to_json(s));
    json texture{{"texel_mm", c.texture.texel_mm},
                 {"exemplar_std_mm", c.texture.exemplar_std_mm},
                 {"exemplar_corr_px", c.texture.exemplar_corr_px},
                 {"exemplar_px", c.texture.exemplar_px},
                 {"patch_px", c.texture.patch_px},
                 {"overlap_px", c.texture.overlap_px},
                 {"milling_stats", {{"mean", c.texture.milling_stats.mean}, {"std", c.texture.milling_stats.stddev()}}},
                 {"milling", to_json(c.texture.milling)},
                 {"randomization", to_json(c.texture.randomization)}};
    if (c.texture.sandblast_exemplar) texture["sandblast_exemplar"] = c.texture.sandblast_exemplar->generic_string();
    return {{"scale", c.scale},
            {"seed", c.seed},
            {"objects", objects},
            {"instances_per_group", c.instances_per_group},
            {"viewpoints", c.viewpoints},
            {"texture_instances", c.texture_instances},
            {"block_mm", json::array({c.block_length_mm, c.block_depth_mm, c.block_height_mm})},
            {"face_translation_px", c.face_translation_px},
            {"rotation_range_deg", c.rotation_range_deg},
            {"roughness", json::array({c.roughness_min, c.roughness_max})},
            {"reflectance", c.reflectance},
            {"focus_distance_mm", c.focus_distance_mm},
            {"camera", to_json(c.camera)},
            {"light", to_json(c.light)},
            {"render", {{"spp", c.render.spp}, {"bounces", c.render.bounces}, {"jitter", c.render.jitter}}},
            {"exposure", c.exposure},
            {"defects", specs},
            {"imprint", {{"shell_shrink", c.imprint.shell_shrink}, {"rim_fraction", c.imprint.rim_fraction}}},
            {"mask_filter",
             {{"visibility_threshold", c.mask_filter.visibility_threshold}, {"dilate_px", c.mask_filter.dilate_px}}},
            {"texture", texture}};
}

void from_json(const json& j, dataset::DatasetConfig& c)
{
    Fields f(j, "dataset");
    f.get("scale", c.scale);
    f.get("seed", c.seed);
    if (const json* o = f.sub("objects")) {
        if (!o->is_array()) fail(Errc::parse, "dataset.objects: expected an array of finish names");
        c.objects.clear();
        for (const json& name : *o) {
            if (!name.is_string()) fail(Errc::parse, "dataset.objects: expected finish names");
            c.objects.push_back(parse_name("dataset.objects", [&] { return dataset::parse_finish(name); }));
        }
    }
    f.get("instances_per_group", c.instances_per_group);
    f.get("viewpoints", c.viewpoints);
    f.get("texture_instances", c.texture_instances);
    if (const json* b = f.sub("block_mm")) {
        const Vec3 v = vec3(*b, "dataset.block_mm");
        c.block_length_mm = v.x;
        c.block_depth_mm = v.y;
        c.block_height_mm = v.z;
    }
    f.get("face_translation_px", c.face_translation_px);
    f.get("rotation_range_deg", c.rotation_range_deg);
    if (const json* r = f.sub("roughness")) {
        const auto rr = range(*r, "dataset.roughness");
        c.roughness_min = rr.lo;
        c.roughness_max = rr.hi;
    }
    f.get("reflectance", c.reflectance);
    f.get("focus_distance_mm", c.focus_distance_mm);
    if (const json* cam = f.sub("camera")) camera_from_json(*cam, c.camera, "dataset.camera", false);
    if (const json* l = f.sub("light")) light_from_json(*l, c.light, "dataset.light");
    if (const json* r = f.sub("render")) {
        Fields rf(*r, "dataset.render");
        rf.get("spp", c.render.spp);
        rf.get("bounces", c.render.bounces);
        rf.get("jitter", c.render.jitter);
        rf.finish();
    }
    f.get("exposure", c.exposure);
    if (const json* d = f.sub("defects")) c.defect_specs = defect_specs_from_json(*d);
    if (const json* im = f.sub("imprint")) {
        Fields imf(*im, "dataset.imprint");
        imf.get("shell_shrink", c.imprint.shell_shrink);
        imf.get("rim_fraction", c.imprint.rim_fraction);
        imf.finish();
    }
    if (const json* mf = f.sub("mask_filter")) {
        Fields mff(*mf, "dataset.mask_filter");
        mff.get("visibility_threshold", c.mask_filter.visibility_threshold);
        mff.get("dilate_px", c.mask_filter.dilate_px);
        mff.finish();
    }
    if (const json* t = f.sub("texture")) {
        Fields tf(*t, "dataset.texture");
        tf.get("texel_mm", c.texture.texel_mm);
        if (const json* e = tf.sub("sandblast_exemplar")) {
            if (!e->is_string()) fail(Errc::parse, "dataset.texture.sandblast_exemplar: expected a path");
            c.texture.sandblast_exemplar = std::filesystem::path(e->get<std::string>());
        }
        tf.get("exemplar_std_mm", c.texture.exemplar_std_mm);
        tf.get("exemplar_corr_px", c.texture.exemplar_corr_px);
        tf.get("exemplar_px", c.texture.exemplar_px);
        tf.get("patch_px", c.texture.patch_px);
        tf.get("overlap_px", c.texture.overlap_px);
        if (const json* s = tf.sub("milling_stats")) {
            Fields sf(*s, "dataset.texture.milling_stats");
            double mean = c.texture.milling_stats.mean, sd = c.texture.milling_stats.stddev();
            sf.get("mean", mean);
            sf.get("std", sd);
            sf.finish();
            c.texture.milling_stats.mean = mean;
            c.texture.milling_stats.variance = sd * sd;
        }
        if (const json* m = tf.sub("milling")) from_json(*m, c.texture.milling);
        if (const json* r = tf.sub("randomization")) from_json(*r, c.texture.randomization);
        tf.finish();
    }
    f.finish();
}

json to_json(const dataset::DatasetManifest& m)
{
    json objects = json::array();
    for (std::size_t i = 0; i < m.objects.size(); ++i)
        objects.push_back({{"object", i}, {"texture", dataset::to_string(m.objects[i])}});
    json viewpoints = json::array();
    for (const auto& v : m.viewpoints)
        viewpoints.push_back({{"id", v.id}, {"face", std::string(1, static_cast<char>('A' + v.face))}, {"angle_deg", v.angle_deg}});
    json instances = json::array();
    for (const auto& inst : m.instances) {
        json textures = json::array();
        for (const auto& t : inst.textures)
            textures.push_back({{"face", t.face},
                                {"texture_instance", t.texture_instance},
                                {"rotation_deg", t.rotation_deg},
                                {"translation_px", json::array({t.translation_px.x, t.translation_px.y})}});
        instances.push_back({{"object", inst.object},
                             {"instance", inst.instance},
                             {"defective", inst.defective},
                             {"defect_geometry", inst.defective ? json(inst.geometry_id) : json(nullptr)},
                             {"roughness", inst.roughness},
                             {"split", dataset::to_string(inst.split)},
                             {"textures", textures}});
    }
    json images = json::array();
    for (const auto& img : m.images) {
        json rec{{"image", img.image_path},
                 {"label", img.label_path},
                 {"object", img.object},
                 {"instance", img.instance},
                 {"defective", img.defective},
                 {"viewpoint", img.viewpoint},
                 {"split", dataset::to_string(img.split)},
                 {"effectively_correct", img.effectively_correct}};
        if (!img.image_hash.empty()) rec["image_hash"] = img.image_hash;
        if (!img.label_hash.empty()) rec["label_hash"] = img.label_hash;
        images.push_back(rec);
    }
    json failures = json::array();
    for (const auto& fl : m.failures) failures.push_back({{"item", fl.item}, {"error", fl.error}});
    return {{"scale", m.scale},
            {"seed", m.seed},
            {"dry_run", m.dry_run},
            {"counts", {{"images", m.images.size()}, {"defective", m.defective_images()}, {"instances", m.instances.size()}}},
            {"objects", objects},
            {"viewpoints", viewpoints},
            {"instances", instances},
            {"images", images},
            {"failures", failures}};
}

json to_json(const metrics::SimilarityReport& r)
{
    auto values = [](const metrics::MetricValues& v) {
        return json{{"1-HistWD", v.hist_wd}, {"1-MAE", v.mae}, {"SSIM", v.ssim}, {"LPIPS", nullptr}};
    };
    json textures = json::array();
    for (const auto& t : r.textures) {
        json matches = json::array();
        for (const auto& m : t.matches)
            matches.push_back({{"viewpoint", m.viewpoint}, {"real_index", m.real_index}, {"synth_index", m.synth_index}});
        textures.push_back({{"texture", t.texture}, {"values", values(t.values)}, {"matches", matches}});
    }
    return {{"textures", textures}, {"overall", values(r.overall)}, {"table", r.table()}};
}

render::Scene scene_from_json(const json& j, const std::filesystem::path& base_dir)
{
    render::Scene scene;
    Fields f(j, "scene");
    if (const json* cam = f.sub("camera")) camera_from_json(*cam, scene.camera, "scene.camera", true);
    if (const json* l = f.sub("light")) light_from_json(*l, scene.light, "scene.light");
    f.get("exposure", scene.exposure);
    f.get("diffuse_override", scene.diffuse_override);
    if (const json* faces = f.sub("faces")) {
        if (!faces->is_array()) fail(Errc::parse, "scene.faces: expected an array");
        for (std::size_t i = 0; i < faces->size(); ++i) {
            const std::string ctx = "scene.faces[" + std::to_string(i) + "]";
            Fields ff((*faces)[i], ctx);
            render::FaceBinding b;
            if (const json* v = ff.sub("origin")) b.face.origin = vec3(*v, ctx + ".origin");
            if (const json* v = ff.sub("u")) b.face.u = vec3(*v, ctx + ".u");
            if (const json* v = ff.sub("v")) b.face.v = vec3(*v, ctx + ".v");
            ff.get("width_mm", b.face.width_mm);
            ff.get("height_mm", b.face.height_mm);
            ff.get("texel_mm", b.texel_mm);
            ff.get("rotation_deg", b.rotation_deg);
            if (const json* t = ff.sub("translation_px")) {
                const auto r = range(*t, ctx + ".translation_px");
                b.translation_px = {r.lo, r.hi};
            }
            ff.get("roughness", b.roughness);
            ff.get("reflectance", b.reflectance);
            std::string height, labels;
            ff.get("height", height);
            ff.get("labels", labels);
            ff.finish();
            if (!height.empty())
                b.normal_map = std::make_shared<NormalMap>(height_to_normal(read_grid(base_dir / height)));
            if (!labels.empty()) b.labels = std::make_shared<Mask>(read_png8(base_dir / labels));
            scene.faces.push_back(std::move(b));
        }
    }
    f.finish();
    scene.validate();
    return scene;
}

json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) fail(Errc::io, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(Errc::parse, path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) fail(Errc::io, "cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) fail(Errc::io, "write failed for " + path.string());
}

}  // namespace surfsynth::io
