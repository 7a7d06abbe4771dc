// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: texture, defect, render, dataset, evaluation and
// mask tools. Exit codes: 0 success, 1 usage, 2 data error, 3 partial batch
// failure.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "surfsynth/config_json.hpp"
#include "surfsynth/dataset.hpp"
#include "surfsynth/defects.hpp"
#include "surfsynth/grid_io.hpp"
#include "surfsynth/masks.hpp"
#include "surfsynth/metrics.hpp"
#include "surfsynth/milling.hpp"
#include "surfsynth/png_io.hpp"
#include "surfsynth/postprocess.hpp"
#include "surfsynth/render.hpp"
#include "surfsynth/rng.hpp"
#include "surfsynth/sandblast.hpp"

namespace fs = std::filesystem;
using namespace surfsynth;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitPartial = 3;

void write_height(const fs::path& path, const HeightField& hf)
{
    const std::string ext = path.extension().string();
    if (ext == ".xyz") write_xyz(path, hf);
    else if (ext == ".png") write_height_png16(path, hf);
    else write_grid(path, hf);
}

HeightField read_height(const fs::path& path)
{
    const std::string ext = path.extension().string();
    if (ext == ".xyz") return load_topography(path, TopographyFormat::xyz_ascii);
    if (ext == ".png") return read_height_png16(path);
    return read_grid(path);
}

std::vector<fs::path> png_files(const fs::path& dir)
{
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".png") out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<fs::path> subdirs(const fs::path& dir)
{
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_directory()) out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

struct TextureArgs {
    std::string finish = "parallel";
    std::string params;
    std::string randomization;
    std::string exemplar;
    std::size_t rows = 512, cols = 512;
    double spacing = 0.0061;
    double stats_mean = 0.0, stats_std = 0.002;
    std::uint64_t seed = 0;
    std::string out;
};

int run_gen_texture(const TextureArgs& a)
{
    const dataset::Finish finish = dataset::parse_finish(a.finish);
    HeightField hf;
    if (finish == dataset::Finish::sandblasted) {
        sandblast::SandblastParams p;
        if (!a.params.empty()) io::from_json(io::read_json_file(a.params), p);
        p.out_rows = a.rows;
        p.out_cols = a.cols;
        p.target_spacing_mm = a.spacing;
        p.seed = a.seed;
        HeightField exemplar;
        if (a.exemplar.empty()) {
            dataset::TextureConfig cfg;
            cfg.texel_mm = a.spacing;
            cfg.exemplar_px = std::max(p.patch_rows, p.patch_cols);
            exemplar = dataset::stand_in_exemplar(cfg, a.seed);
        } else {
            exemplar = read_height(a.exemplar);
        }
        hf = sandblast::generate_sandblast(exemplar, p);
    } else {
        milling::MillingParams p;
        if (!a.params.empty()) io::from_json(io::read_json_file(a.params), p);
        if (!a.randomization.empty()) {
            dataset::TextureRandomization r;
            io::from_json(io::read_json_file(a.randomization), r);
            p = dataset::sample_texture_params(p, r, a.seed);
        }
        p.path_mode = finish == dataset::Finish::spiral ? milling::PathMode::spiral : milling::PathMode::parallel;
        p.seed = a.seed;
        FieldStats stats;
        stats.mean = a.stats_mean;
        stats.variance = a.stats_std * a.stats_std;
        hf = milling::generate_milling(stats, p, a.rows, a.cols, a.spacing);
    }
    write_height(a.out, hf);
    const FieldStats s = compute_stats(hf);
    std::cout << "wrote " << a.out << " (" << hf.rows() << "x" << hf.cols() << ", mean " << s.mean << " mm, std "
              << s.stddev() << " mm)\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct DefectArgs {
    std::string spec;
    std::uint64_t seed = 0;
    std::vector<double> face_size{8.0, 6.0};
    std::string distribution = "uniform";
    std::string out_json;
    std::string surface;
    std::string out_surface;
    std::string out_mask;
    double shell_shrink = 0.95;
};

int run_gen_defects(const DefectArgs& a)
{
    const auto specs = a.spec.empty() ? defects::default_defect_specs()
                                      : io::defect_specs_from_json(io::read_json_file(a.spec));
    if (a.face_size.size() % 2 != 0) fail(Errc::invalid_argument, "--face takes width/height pairs");
    std::vector<defects::FaceExtent> faces;
    for (std::size_t i = 0; i < a.face_size.size(); i += 2) faces.push_back({a.face_size[i], a.face_size[i + 1]});
    const auto dist = a.distribution == "normal" ? defects::PositionDistribution::normal
                                                 : defects::PositionDistribution::uniform;
    const auto set = defects::sample_defect_set(specs, faces, dist, a.seed);

    io::json out = io::json::array();
    for (const auto& d : set) out.push_back(io::to_json(d));
    if (!a.out_json.empty()) io::write_json_file(a.out_json, out);
    else std::cout << out.dump(2) << '\n';

    if (!a.surface.empty()) {
        // Surface pixel (i, j) sits at face point (j, i) * spacing.
        HeightField surf = read_height(a.surface);
        Mask labels(surf.rows(), surf.cols(), 0);
        defects::ImprintOptions opt;
        opt.shell_shrink = a.shell_shrink;
        std::size_t applied = 0;
        for (const auto& d : set) {
            if (d.face != 0) continue;
            const auto res = defects::imprint_with_masks(surf, defects::build_tool(d, surf.spacing_mm()), d.position, opt);
            if (!res.applied) continue;
            ++applied;
            surf = res.surface;
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (res.shell.values()[i]) labels.values()[i] = static_cast<std::uint8_t>(d.label);
        }
        if (!a.out_surface.empty()) write_height(a.out_surface, surf);
        if (!a.out_mask.empty()) write_png8(a.out_mask, labels);
        std::cerr << "imprinted " << applied << " defects on face 0\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct RenderArgs {
    std::string scene;
    int spp = 16;
    int bounces = 2;
    std::uint64_t seed = 0;
    std::string out;
    std::string labels_out;
    bool serial = false;
};

int run_render(const RenderArgs& a)
{
    const fs::path scene_path(a.scene);
    const render::Scene scene = io::scene_from_json(io::read_json_file(scene_path), scene_path.parent_path());
    render::RenderSettings rs;
    rs.spp = a.spp;
    rs.bounces = a.bounces;
    rs.seed = a.seed;
    const auto result = render::render_image(scene, rs, a.serial ? Exec::serial : Exec::parallel);
    write_png8(a.out, render::encode_8bit(result.radiance, scene.exposure));
    if (!a.labels_out.empty()) write_png8(a.labels_out, render::render_annotation(scene).labels);
    std::cout << "wrote " << a.out << '\n';
    return 0;
}

// ---------------------------------------------------------------------------

struct DatasetArgs {
    std::string config;
    std::string scale = "desk";
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool dry_run = false;
};

int run_dataset(const DatasetArgs& a)
{
    dataset::DatasetConfig cfg = dataset::preset(a.scale);
    if (!a.config.empty()) io::from_json(io::read_json_file(a.config), cfg);
    if (a.seed) cfg.seed = *a.seed;
    const fs::path out(a.out_dir);
    fs::create_directories(out);
    io::write_json_file(out / "config.json", io::to_json(cfg));
    const auto manifest = dataset::generate_dataset(cfg, out, a.dry_run);
    io::write_json_file(out / "manifest.json", io::to_json(manifest));
    std::cout << manifest.images.size() << " images (" << manifest.defective_images() << " defective), "
              << manifest.failures.size() << " failures\n";
    for (const auto& f : manifest.failures) std::cerr << "failed: " << f.item << ": " << f.error << '\n';
    return manifest.failures.empty() ? 0 : kExitPartial;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
    std::string real_dir;
    std::string synth_dir;
    std::string masks_dir;
    std::string report_out;
    std::string align = "preset";
    double defocus = 0.0;
    bool bloom = false;
    double noise = 0.0;
    std::uint64_t seed = 0;
};

// Layout: <dir>/<texture>/<viewpoint>/*.png for images and
// <masks>/<texture>/<viewpoint>.png for the shared meta-mask.
int run_evaluate(const EvaluateArgs& a)
{
    std::vector<metrics::TextureSet> sets;
    for (const fs::path& tex_dir : subdirs(a.real_dir)) {
        const std::string texture = tex_dir.filename().string();
        metrics::TextureSet set{texture, {}};
        std::vector<Image8> all_real, all_synth;
        std::vector<Mask> all_masks;
        for (const fs::path& vp_dir : subdirs(tex_dir)) {
            const std::string vp = vp_dir.filename().string();
            metrics::ViewpointSet vs;
            vs.viewpoint = vp;
            for (const auto& p : png_files(vp_dir)) vs.real.push_back(read_png8(p));
            const fs::path synth_vp = fs::path(a.synth_dir) / texture / vp;
            if (!fs::is_directory(synth_vp)) fail(Errc::io, "missing synthetic directory " + synth_vp.string());
            for (const auto& p : png_files(synth_vp)) vs.synth.push_back(read_png8(p));
            vs.mask = read_png8(fs::path(a.masks_dir) / texture / (vp + ".png"));
            if (vs.real.empty() || vs.synth.empty()) fail(Errc::degenerate, "no images for " + texture + "/" + vp);
            for (const auto& img : vs.real) all_real.push_back(img);
            for (const auto& img : vs.synth) {
                all_synth.push_back(img);
                all_masks.push_back(vs.mask);
            }
            set.viewpoints.push_back(std::move(vs));
        }
        if (set.viewpoints.empty()) continue;

        std::optional<metrics::AlignmentParams> params;
        if (a.align == "preset") params = metrics::preset_alignment(texture);
        else if (a.align == "moments" || a.align == "gap") {
            std::vector<Mask> real_masks;
            for (const auto& vs : set.viewpoints)
                for (std::size_t i = 0; i < vs.real.size(); ++i) real_masks.push_back(vs.mask);
            const auto method = a.align == "gap" ? metrics::AlignmentMethod::gap : metrics::AlignmentMethod::moments;
            params = metrics::estimate_alignment(all_real, real_masks, all_synth, all_masks, method).params;
        } else if (a.align != "none") {
            fail(Errc::invalid_argument, "unknown alignment '" + a.align + "'");
        }
        if (!params && a.align == "preset")
            std::cerr << "no preset alignment for '" << texture << "', leaving intensities unchanged\n";

        std::vector<post::Op> ops;
        if (a.defocus > 0.0) ops.push_back(post::DefocusBlur{a.defocus});
        if (a.bloom) ops.push_back(post::Bloom{});
        if (a.noise > 0.0) ops.push_back(post::GaussianNoise{a.noise});
        for (std::size_t v = 0; v < set.viewpoints.size(); ++v)
            for (std::size_t i = 0; i < set.viewpoints[v].synth.size(); ++i) {
                Image8& img = set.viewpoints[v].synth[i];
                if (params) img = metrics::apply_alignment(img, *params);
                if (!ops.empty())
                    img = post::to_8bit(post::post_process(post::to_gray(img), ops, derive_seed(a.seed, sets.size(), v, i)));
            }
        sets.push_back(std::move(set));
    }
    if (sets.empty()) fail(Errc::degenerate, "no texture directories under " + a.real_dir);
    const auto report = metrics::evaluate_similarity(sets);
    if (!a.report_out.empty()) io::write_json_file(a.report_out, io::to_json(report));
    std::cout << report.table();
    return 0;
}

// ---------------------------------------------------------------------------

struct MaskArgs {
    std::string image;
    std::string labels;
    std::string out;
    double threshold = 0.05;
    int dilate = 1;
};

int run_masks(const MaskArgs& a)
{
    masks::FilterOptions opt{a.threshold, a.dilate};
    const Mask out = masks::filter_and_dilate_masks(read_png8(a.image), read_png8(a.labels), opt);
    write_png8(a.out, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Surface texture, defect and inspection image synthesis"};
    app.require_subcommand(1);

    TextureArgs tex;
    auto* t = app.add_subcommand("gen-texture", "Synthesize a height field");
    t->add_option("--finish", tex.finish, "sandblasted, parallel or spiral")->capture_default_str();
    t->add_option("--params", tex.params, "JSON parameter file (milling or sandblast)");
    t->add_option("--randomization", tex.randomization, "JSON value sets; milling params are drawn from them");
    t->add_option("--exemplar", tex.exemplar, "measured topography (.xyz, .png or grid); a smooth noise stand-in otherwise");
    t->add_option("--rows", tex.rows)->capture_default_str();
    t->add_option("--cols", tex.cols)->capture_default_str();
    t->add_option("--spacing", tex.spacing, "pixel spacing in mm")->capture_default_str();
    t->add_option("--stats-mean", tex.stats_mean, "target mean height in mm (milling)")->capture_default_str();
    t->add_option("--stats-std", tex.stats_std, "target height std in mm (milling)")->capture_default_str();
    t->add_option("--seed", tex.seed)->capture_default_str();
    t->add_option("-o,--out", tex.out, "output (.grid, .xyz or 16-bit .png)")->required();

    DefectArgs def;
    auto* d = app.add_subcommand("gen-defects", "Sample defect instances and optionally imprint them");
    d->add_option("--spec", def.spec, "JSON array of defect specs (default: built-in table)");
    d->add_option("--seed", def.seed)->capture_default_str();
    d->add_option("--face", def.face_size, "face width and height in mm, repeatable")->expected(2, 64);
    d->add_option("--distribution", def.distribution)->check(CLI::IsMember({"uniform", "normal"}))->capture_default_str();
    d->add_option("--out", def.out_json, "defect list JSON (default: stdout)");
    d->add_option("--surface", def.surface, "height field of face 0 to imprint into");
    d->add_option("--out-surface", def.out_surface);
    d->add_option("--out-mask", def.out_mask, "label PNG of the shell masks");
    d->add_option("--shell-shrink", def.shell_shrink)->capture_default_str();

    RenderArgs ren;
    auto* r = app.add_subcommand("render", "Render a scene file");
    r->add_option("--scene", ren.scene)->required()->check(CLI::ExistingFile);
    r->add_option("--spp", ren.spp)->capture_default_str();
    r->add_option("--bounces", ren.bounces)->capture_default_str();
    r->add_option("--seed", ren.seed)->capture_default_str();
    r->add_option("-o,--out", ren.out)->required();
    r->add_option("--labels-out", ren.labels_out);
    r->add_flag("--serial", ren.serial, "use the single-threaded reference kernel");

    DatasetArgs ds;
    auto* g = app.add_subcommand("dataset", "Generate a labelled image dataset");
    g->add_option("--config", ds.config, "JSON overrides on top of the scale preset");
    g->add_option("--scale", ds.scale)->check(CLI::IsMember({"desk", "paper"}))->capture_default_str();
    g->add_option("--out-dir", ds.out_dir)->required();
    g->add_option("--seed", ds.seed);
    g->add_flag("--dry-run", ds.dry_run, "write the manifest only");

    EvaluateArgs ev;
    auto* e = app.add_subcommand("evaluate", "Compare synthetic images against real ones");
    e->add_option("--real-dir", ev.real_dir)->required()->check(CLI::ExistingDirectory);
    e->add_option("--synth-dir", ev.synth_dir)->required()->check(CLI::ExistingDirectory);
    e->add_option("--masks-dir", ev.masks_dir)->required()->check(CLI::ExistingDirectory);
    e->add_option("--report-out", ev.report_out);
    e->add_option("--align", ev.align)->check(CLI::IsMember({"preset", "moments", "gap", "none"}))->capture_default_str();
    e->add_option("--defocus", ev.defocus, "disk blur radius in pixels");
    e->add_flag("--bloom", ev.bloom);
    e->add_option("--noise", ev.noise, "Gaussian noise std in grey levels");
    e->add_option("--seed", ev.seed)->capture_default_str();

    MaskArgs mk;
    auto* m = app.add_subcommand("masks", "Drop low-visibility defect masks and dilate the rest");
    m->add_option("--image", mk.image)->required()->check(CLI::ExistingFile);
    m->add_option("--labels", mk.labels)->required()->check(CLI::ExistingFile);
    m->add_option("-o,--out", mk.out)->required();
    m->add_option("--threshold", mk.threshold)->capture_default_str();
    m->add_option("--dilate", mk.dilate)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& s) {
        return app.exit(s);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return kExitUsage;
    }

    try {
        if (*t) return run_gen_texture(tex);
        if (*d) return run_gen_defects(def);
        if (*r) return run_render(ren);
        if (*g) return run_dataset(ds);
        if (*e) return run_evaluate(ev);
        if (*m) return run_masks(mk);
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return err.code() == Errc::invalid_argument ? kExitUsage : kExitData;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
