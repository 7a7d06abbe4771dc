// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "surfsynth/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "surfsynth/rng.hpp"

namespace surfsynth::render {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinAlpha = 1e-4;

double schlick(double f0, double cos_theta)
{
    const double m = 1.0 - std::clamp(cos_theta, 0.0, 1.0);
    return f0 + (1.0 - f0) * m * m * m * m * m;
}

double ggx_d(double alpha, double n_h)
{
    const double a2 = alpha * alpha;
    const double k = n_h * n_h * (a2 - 1.0) + 1.0;
    return a2 / (kPi * k * k);
}

double smith_g1(double alpha, double n_v)
{
    const double a2 = alpha * alpha;
    return 2.0 * n_v / (n_v + std::sqrt(a2 + (1.0 - a2) * n_v * n_v));
}

struct Frame {
    Vec3 t, b, n;
    explicit Frame(const Vec3& normal) : n(normal)
    {
        const Vec3 helper = std::abs(n.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
        t = normalize(cross(helper, n));
        b = cross(n, t);
    }
    Vec3 to_world(const Vec3& v) const { return t * v.x + b * v.y + n * v.z; }
};

struct SurfaceHit {
    std::size_t face = 0;
    FaceHit hit;
};

std::optional<SurfaceHit> closest_face(const Scene& scene, const Ray& ray, double t_max,
                                       std::size_t skip = static_cast<std::size_t>(-1))
{
    std::optional<SurfaceHit> best;
    for (std::size_t i = 0; i < scene.faces.size(); ++i) {
        if (i == skip) continue;
        if (auto h = intersect_face(scene.faces[i].face, ray, 0.0, best ? best->hit.t : t_max))
            best = SurfaceHit{i, *h};
    }
    return best;
}

bool face_blocks(const Scene& scene, const Ray& ray, double t_max, std::size_t skip)
{
    for (std::size_t i = 0; i < scene.faces.size(); ++i)
        if (i != skip && intersect_face(scene.faces[i].face, ray, 0.0, t_max)) return true;
    return false;
}

Vec3 shading_normal_world(const FaceBinding& fb, double s, double t)
{
    const Vec3 n = map_texture_to_face(fb, {s, t});
    return normalize(fb.face.u * n.x + fb.face.v * n.y + fb.face.normal() * n.z);
}

// One path sample. Emission is only counted for camera rays that see the
// light directly; later hits are covered by light sampling.
double trace(const Scene& scene, const Torus& torus, Ray ray, int bounces, CounterRng& rng)
{
    const double le = scene.light.radiance;
    const double tie = 1e-6 * (torus.major + torus.minor);
    double throughput = 1.0;
    double radiance = 0.0;
    std::size_t from_face = static_cast<std::size_t>(-1);

    for (int depth = 0; depth < bounces; ++depth) {
        const double inf = std::numeric_limits<double>::infinity();
        const auto face_hit = closest_face(scene, ray, inf, from_face);
        const auto light_t = intersect_torus(torus, ray, 0.0, face_hit ? face_hit->hit.t : inf);
        if (light_t) {
            if (depth == 0) radiance += throughput * le;
            break;
        }
        if (!face_hit || !face_hit->hit.front) break;

        const FaceBinding& fb = scene.faces[face_hit->face];
        const Vec3 x = ray.origin + ray.dir * face_hit->hit.t;
        const Vec3 ng = fb.face.normal();
        const Vec3 ns = shading_normal_world(fb, face_hit->hit.s, face_hit->hit.tt);
        const Vec3 wo = ray.dir * -1.0;
        const Brdf brdf{fb.roughness, fb.reflectance, scene.diffuse_override};

        // Next-event estimation: uniform area sample on the torus.
        const TorusSample ls = sample_torus(torus, [&] { return rng.next(); });
        Vec3 to_light = ls.point - x;
        const double dist = length(to_light);
        const Vec3 wi = to_light / dist;
        const double cos_l = -dot(ls.normal, wi);
        const double cos_s = dot(ns, wi);
        if (cos_l > 0.0 && cos_s > 0.0 && dot(ng, wi) > 0.0) {
            const Ray shadow{x, wi};
            if (!face_blocks(scene, shadow, dist, face_hit->face) &&
                !intersect_torus(torus, shadow, 0.0, dist - tie)) {
                const double f = brdf.eval(ns, wo, wi);
                radiance += (throughput * f * cos_s * cos_l / (dist * dist * ls.pdf_area)) * le;
            }
        }
        if (depth + 1 == bounces) break;

        // Continue the path by importance sampling the BRDF.
        const Frame frame(ns);
        const double n_wo = dot(ns, wo);
        if (n_wo <= 0.0) break;
        const double u1 = rng.next(), u2 = rng.next();
        Vec3 next;
        double weight;
        if (brdf.diffuse) {
            const double r = std::sqrt(u1), phi = 2.0 * kPi * u2;
            next = frame.to_world({r * std::cos(phi), r * std::sin(phi), std::sqrt(std::max(0.0, 1.0 - u1))});
            weight = brdf.reflectance;
        } else {
            const double alpha = std::max(kMinAlpha, brdf.roughness);
            const double tan2 = alpha * alpha * u1 / (1.0 - u1);
            const double cos_h = 1.0 / std::sqrt(1.0 + tan2);
            const double sin_h = std::sqrt(std::max(0.0, 1.0 - cos_h * cos_h));
            const double phi = 2.0 * kPi * u2;
            const Vec3 h = frame.to_world({sin_h * std::cos(phi), sin_h * std::sin(phi), cos_h});
            const double wo_h = dot(wo, h);
            if (wo_h <= 0.0) break;
            next = h * (2.0 * wo_h) - wo;
            const double n_wi = dot(ns, next);
            if (n_wi <= 0.0) break;
            weight = schlick(brdf.reflectance, wo_h) * smith_g1(alpha, n_wo) * smith_g1(alpha, n_wi) * wo_h /
                     (n_wo * cos_h);
        }
        if (dot(ng, next) <= 0.0 || dot(ns, next) <= 0.0) break;
        throughput *= weight;
        ray = {x, normalize(next)};
        from_face = face_hit->face;
    }
    return radiance;
}

}  // namespace

double Brdf::eval(const Vec3& n, const Vec3& wo, const Vec3& wi) const
{
    const double n_wo = dot(n, wo), n_wi = dot(n, wi);
    if (n_wo <= 0.0 || n_wi <= 0.0) return 0.0;
    if (diffuse) return reflectance / kPi;
    const double alpha = std::max(kMinAlpha, roughness);
    const Vec3 h = normalize(wo + wi);
    const double d = ggx_d(alpha, dot(n, h));
    const double g = smith_g1(alpha, n_wo) * smith_g1(alpha, n_wi);
    return d * g * schlick(reflectance, dot(wo, h)) / (4.0 * n_wo * n_wi);
}

std::array<std::size_t, 2> texel_at(const FaceBinding& fb, std::size_t tex_rows, std::size_t tex_cols, double s,
                                    double t)
{
    const double theta = fb.rotation_deg * kPi / 180.0;
    const Vec2 q = rotate({s - 0.5 * fb.face.width_mm, t - 0.5 * fb.face.height_mm}, -theta);
    const double x = q.x / fb.texel_mm + fb.translation_px.x + 0.5 * static_cast<double>(tex_cols);
    const double y = q.y / fb.texel_mm + fb.translation_px.y + 0.5 * static_cast<double>(tex_rows);
    if (!(x >= 0.0 && y >= 0.0 && x < static_cast<double>(tex_cols) && y < static_cast<double>(tex_rows)))
        fail(Errc::invalid_argument, "texture lookup at (" + std::to_string(s) + ", " + std::to_string(t) +
                                         ") mm falls outside the texture");
    return {static_cast<std::size_t>(y), static_cast<std::size_t>(x)};
}

Vec3 map_texture_to_face(const FaceBinding& fb, Vec2 p)
{
    if (!fb.normal_map) return {0.0, 0.0, 1.0};
    const auto [r, c] = texel_at(fb, fb.normal_map->rows(), fb.normal_map->cols(), p.x, p.y);
    const Vec3 n = (*fb.normal_map)(r, c);
    const Vec2 xy = rotate({n.x, n.y}, fb.rotation_deg * kPi / 180.0);
    return {xy.x, xy.y, n.z};
}

void Scene::validate() const
{
    const PinholeCamera& c = camera;
    require(c.width > 0 && c.height > 0, "camera resolution must be positive");
    require(c.pixel_size_mm > 0.0 && c.focal_length_mm > 0.0, "camera intrinsics must be positive");
    require(c.pose.orthonormal(1e-6), "camera orientation must be orthonormal");
    require(light.minor_radius_mm > 0.0 && light.minor_radius_mm < light.major_radius_mm,
            "ring light needs 0 < minor radius < major radius");
    require(light.radiance >= 0.0, "light radiance must be nonnegative");
    require(exposure > 0.0, "exposure must be positive");
    for (const FaceBinding& fb : faces) {
        const Face& f = fb.face;
        require(f.width_mm > 0.0 && f.height_mm > 0.0, "face dimensions must be positive");
        require(std::abs(length(f.u) - 1.0) < 1e-6 && std::abs(length(f.v) - 1.0) < 1e-6 &&
                    std::abs(dot(f.u, f.v)) < 1e-6,
                "face axes must be orthonormal");
        require(fb.texel_mm > 0.0, "texel size must be positive");
        require(fb.rotation_deg >= -180.0 && fb.rotation_deg <= 180.0, "texture rotation must lie in [-180, 180]");
        require(fb.roughness >= 0.0 && fb.roughness <= 1.0, "roughness must lie in [0, 1]");
        require(fb.reflectance >= 0.0 && fb.reflectance <= 1.0, "reflectance must lie in [0, 1]");
        if (fb.normal_map && fb.labels)
            require(fb.labels->rows() == fb.normal_map->rows() && fb.labels->cols() == fb.normal_map->cols(),
                    "label grid must match the normal map");
    }
}

RenderResult render_image(const Scene& scene, const RenderSettings& settings, Exec exec)
{
    scene.validate();
    require(settings.spp >= 1, "spp must be at least 1");
    require(settings.bounces >= 1, "bounces must be at least 1");

    const auto w = static_cast<std::size_t>(scene.camera.width);
    const auto h = static_cast<std::size_t>(scene.camera.height);
    RenderResult out{GrayImage(h, w), Grid<double>(h, w), Mask(h, w, 0)};
    const Torus torus = light_torus(scene.camera, scene.light);
    const double inf = std::numeric_limits<double>::infinity();

    const auto rows = static_cast<std::ptrdiff_t>(h);
    ExceptionSlot errors;
#pragma omp parallel for schedule(dynamic) if (is_parallel(exec))
    for (std::ptrdiff_t ri = 0; ri < rows; ++ri) errors.run([&] {
        const auto r = static_cast<std::size_t>(ri);
        for (std::size_t c = 0; c < w; ++c) {
            const Ray center = camera_ray(scene.camera, static_cast<double>(c) + 0.5, static_cast<double>(r) + 0.5);
            out.coverage(r, c) = closest_face(scene, center, inf) ? 1 : 0;

            double sum = 0.0, sum2 = 0.0;
            const std::uint64_t pixel = r * w + c;
            for (int s = 0; s < settings.spp; ++s) {
                CounterRng rng(derive_seed(settings.seed, pixel, static_cast<std::uint64_t>(s)));
                double jx = 0.5, jy = 0.5;
                if (settings.jitter) {
                    jx = rng.next();
                    jy = rng.next();
                }
                const Ray ray = camera_ray(scene.camera, static_cast<double>(c) + jx, static_cast<double>(r) + jy);
                const double v = trace(scene, torus, ray, settings.bounces, rng);
                sum += v;
                sum2 += v * v;
            }
            const double n = settings.spp;
            const double mean = sum / n;
            out.radiance(r, c) = mean;
            out.variance(r, c) = n > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) / n : 0.0;
        }
    });
    errors.rethrow();
    return out;
}

Image8 encode_8bit(const GrayImage& radiance, double exposure)
{
    Image8 out(radiance.rows(), radiance.cols());
    for (std::size_t i = 0; i < radiance.size(); ++i) {
        const double v = std::clamp(radiance.values()[i] * exposure, 0.0, 1.0);
        out.values()[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    return out;
}

Annotation render_annotation(const Scene& scene)
{
    scene.validate();
    const auto w = static_cast<std::size_t>(scene.camera.width);
    const auto h = static_cast<std::size_t>(scene.camera.height);
    Annotation out{Image8(h, w, 0), Mask(h, w, 0)};
    const double inf = std::numeric_limits<double>::infinity();

    const auto rows = static_cast<std::ptrdiff_t>(h);
    ExceptionSlot errors;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t ri = 0; ri < rows; ++ri) errors.run([&] {
        const auto r = static_cast<std::size_t>(ri);
        for (std::size_t c = 0; c < w; ++c) {
            const Ray center = camera_ray(scene.camera, static_cast<double>(c) + 0.5, static_cast<double>(r) + 0.5);
            const auto hit = closest_face(scene, center, inf);
            if (!hit) continue;
            out.object(r, c) = 1;
            const FaceBinding& fb = scene.faces[hit->face];
            if (!hit->hit.front || !fb.labels) continue;
            const auto [tr, tc] = texel_at(fb, fb.labels->rows(), fb.labels->cols(), hit->hit.s, hit->hit.tt);
            out.labels(r, c) = (*fb.labels)(tr, tc);
        }
    });
    errors.rethrow();
    return out;
}

}  // namespace surfsynth::render
