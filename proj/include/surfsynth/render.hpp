// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "surfsynth/exec.hpp"
#include "surfsynth/grid.hpp"
#include "surfsynth/vec.hpp"

namespace surfsynth::render {

/// Rigid frame: camera convention x right, y down, z forward.
struct Pose {
    Vec3 position{0.0, 0.0, 0.0};
    Vec3 right{1.0, 0.0, 0.0};
    Vec3 down{0.0, 1.0, 0.0};
    Vec3 forward{0.0, 0.0, 1.0};

    bool orthonormal(double tol = 1e-9) const;
    Vec3 to_world(const Vec3& local) const { return right * local.x + down * local.y + forward * local.z; }
    Vec3 to_local(const Vec3& world) const { return {dot(world, right), dot(world, down), dot(world, forward)}; }
};

/// Pose at `eye` looking at `target`; `up` fixes the roll (image y points
/// away from it).
Pose look_at(const Vec3& eye, const Vec3& target, const Vec3& up = {0.0, -1.0, 0.0});

struct PinholeCamera {
    int width = 256;
    int height = 256;
    double pixel_size_mm = 0.00345;
    double focal_length_mm = 16.0;
    Pose pose;
};

/// Torus ring light around the camera (same center and axis as the camera).
struct RingLight {
    double major_radius_mm = 40.0;
    double minor_radius_mm = 5.0;
    double radiance = 1.0;
};

struct Ray {
    Vec3 origin;
    Vec3 dir;  // unit length
};

/// Ray through image position (px + jx, py + jy), j in [0, 1).
Ray camera_ray(const PinholeCamera& cam, double px, double py);

/// Planar rectangle {origin + s u + t v : s in [0, width], t in [0, height]}.
/// The front side faces u x v.
struct Face {
    Vec3 origin;
    Vec3 u{1.0, 0.0, 0.0};
    Vec3 v{0.0, 1.0, 0.0};
    double width_mm = 1.0;
    double height_mm = 1.0;

    Vec3 normal() const { return cross(u, v); }
};

struct FaceHit {
    double t = 0.0;
    double s = 0.0;
    double tt = 0.0;
    bool front = true;
};

std::optional<FaceHit> intersect_face(const Face& face, const Ray& ray, double t_min, double t_max);

/// Real roots of sum_k coeffs[k] x^k in [lo, hi], ascending. Roots are
/// isolated between the critical points found recursively from derivatives
/// and refined by safeguarded Newton steps.
std::vector<double> polynomial_roots(const std::vector<double>& coeffs, double lo, double hi);

/// Torus centered at `center` with symmetry axis `axis` (unit).
struct Torus {
    Vec3 center;
    Vec3 axis{0.0, 0.0, 1.0};
    double major = 1.0;
    double minor = 0.25;
};

/// Smallest ray parameter in (t_min, t_max) where the ray meets the torus.
std::optional<double> intersect_torus(const Torus& torus, const Ray& ray, double t_min, double t_max);

struct TorusSample {
    Vec3 point;
    Vec3 normal;
    double pdf_area = 0.0;
};

/// Uniform sample over the torus area from two or more uniforms (v by
/// rejection); pdf = 1 / (4 pi^2 R r).
template <class Uniform>
TorusSample sample_torus(const Torus& torus, Uniform&& next);

Torus light_torus(const PinholeCamera& cam, const RingLight& light);

/// Texture and material assignment of one face. The normal map (and
/// optional label grid) has texel size `texel_mm`; texel (row, col) covers
/// x in [col, col+1) * texel, y likewise, in texture coordinates.
struct FaceBinding {
    Face face;
    std::shared_ptr<const NormalMap> normal_map;  // null: flat
    std::shared_ptr<const Mask> labels;           // null: no defects
    double texel_mm = 0.01;
    double rotation_deg = 0.0;
    Vec2 translation_px{0.0, 0.0};
    double roughness = 0.05;
    double reflectance = 0.9;
};

/// Texel hit by face point (s, t) in mm. The face center maps to the texture
/// center shifted by the translation; the face frame is rotated by
/// rotation_deg relative to the texture. Throws when outside the texture.
std::array<std::size_t, 2> texel_at(const FaceBinding& binding, std::size_t tex_rows, std::size_t tex_cols, double s,
                                    double t);

/// Shading normal in the face frame (x along u, y along v, z along u x v).
Vec3 map_texture_to_face(const FaceBinding& binding, Vec2 surface_point_mm);

struct Scene {
    PinholeCamera camera;
    RingLight light;
    std::vector<FaceBinding> faces;
    double exposure = 1.0;
    bool diffuse_override = false;  // replace the metal BRDF by a Lambertian one

    void validate() const;
};

struct RenderSettings {
    int spp = 16;
    int bounces = 2;
    std::uint64_t seed = 0;
    bool jitter = true;  // box-filter jitter of primary rays
};

struct RenderResult {
    GrayImage radiance;     // linear
    Grid<double> variance;  // variance of each pixel estimate
    Mask coverage;          // 1 where the pixel-center ray hits a face
};

RenderResult render_image(const Scene& scene, const RenderSettings& settings, Exec exec = Exec::parallel);

/// Exposure scale, clamp to [0, 1], round to 8 bit. No gamma.
Image8 encode_8bit(const GrayImage& radiance, double exposure);

struct Annotation {
    Image8 labels;  // class of the emissive label surface hit, 0 elsewhere
    Mask object;    // 1 where the pixel-center ray hits a face
};

/// Annotation pass: lights off, faces black, label texels emissive with
/// their class value. Uses the same pixel-center rays as the coverage of
/// render_image.
Annotation render_annotation(const Scene& scene);

/// Reflectance models, exposed for testing.
struct Brdf {
    double roughness = 0.05;
    double reflectance = 0.9;
    bool diffuse = false;

    double eval(const Vec3& n, const Vec3& wo, const Vec3& wi) const;
};

// -- template implementation --

template <class Uniform>
TorusSample sample_torus(const Torus& torus, Uniform&& next)
{
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double R = torus.major, r = torus.minor;
    const double u = two_pi * next();
    double v = 0.0;
    for (;;) {
        v = two_pi * next();
        if (next() * (R + r) <= R + r * std::cos(v)) break;
    }
    const Vec3 a = torus.axis;
    const Vec3 helper = std::abs(a.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    const Vec3 e1 = normalize(cross(helper, a));
    const Vec3 e2 = cross(a, e1);
    const Vec3 radial = e1 * std::cos(u) + e2 * std::sin(u);
    const Vec3 n = radial * std::cos(v) + a * std::sin(v);
    return {torus.center + radial * R + n * r, n, 1.0 / (two_pi * two_pi * R * r)};
}

}  // namespace surfsynth::render
