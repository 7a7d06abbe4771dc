// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>

#include "surfsynth/render.hpp"

namespace surfsynth::render {

namespace {

constexpr std::size_t kMaxDegree = 16;

double horner(const double* c, std::size_t n, double x)
{
    double acc = 0.0;
    for (std::size_t k = n; k-- > 0;) acc = acc * x + c[k];
    return acc;
}

// Root of a polynomial with a sign change on [a, b]: Newton steps that stay
// inside the shrinking bracket, bisection otherwise.
double refine(const double* c, const double* dc, std::size_t n, double a, double b, double fa)
{
    double x = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        const double fx = horner(c, n, x);
        if (fx == 0.0) return x;
        if ((fx < 0.0) == (fa < 0.0)) {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double dfx = horner(dc, n - 1, x);
        double next = dfx != 0.0 ? x - fx / dfx : m;
        if (!(next > a && next < b)) next = m;
        if (next == x) break;
        x = next;
    }
    return x;
}

// Roots in [lo, hi] of c[0..n), ascending; returns the count written to out.
std::size_t roots_in(const double* coeffs, std::size_t n, double lo, double hi, double* out)
{
    while (n > 0 && coeffs[n - 1] == 0.0) --n;
    if (n <= 1 || lo > hi) return 0;
    const double* c = coeffs;

    if (n == 2) {
        const double x = -c[0] / c[1];
        if (x >= lo && x <= hi) {
            out[0] = x;
            return 1;
        }
        return 0;
    }
    if (n == 3) {
        const double a = c[2], b = c[1], cc = c[0];
        const double disc = b * b - 4.0 * a * cc;
        if (disc < 0.0) return 0;
        const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
        double x1 = q / a, x2 = q != 0.0 ? cc / q : x1;
        if (x1 > x2) std::swap(x1, x2);
        std::size_t count = 0;
        for (double x : {x1, x2})
            if (x >= lo && x <= hi && (count == 0 || x != out[count - 1])) out[count++] = x;
        return count;
    }

    double deriv[kMaxDegree];
    for (std::size_t k = 1; k < n; ++k) deriv[k - 1] = static_cast<double>(k) * c[k];
    double crit[kMaxDegree];
    const std::size_t n_crit = roots_in(deriv, n - 1, lo, hi, crit);

    double knots[kMaxDegree + 2];
    std::size_t n_knots = 0;
    knots[n_knots++] = lo;
    for (std::size_t i = 0; i < n_crit; ++i)
        if (crit[i] > knots[n_knots - 1]) knots[n_knots++] = crit[i];
    if (hi > knots[n_knots - 1]) knots[n_knots++] = hi;

    std::size_t count = 0;
    double fa = horner(c, n, knots[0]);
    if (fa == 0.0) out[count++] = knots[0];
    for (std::size_t i = 0; i + 1 < n_knots; ++i) {
        const double a = knots[i], b = knots[i + 1];
        const double fb = horner(c, n, b);
        if (fb == 0.0) {
            out[count++] = b;
        } else if (fa != 0.0 && (fa < 0.0) != (fb < 0.0)) {
            out[count++] = refine(c, deriv, n, a, b, fa);
        }
        fa = fb;
    }
    return count;
}

}  // namespace

bool Pose::orthonormal(double tol) const
{
    auto unit = [&](const Vec3& v) { return std::abs(length(v) - 1.0) <= tol; };
    return unit(right) && unit(down) && unit(forward) && std::abs(dot(right, down)) <= tol &&
           std::abs(dot(right, forward)) <= tol && std::abs(dot(down, forward)) <= tol &&
           length(cross(right, down) - forward) <= 10.0 * tol;
}

Pose look_at(const Vec3& eye, const Vec3& target, const Vec3& up)
{
    const Vec3 fwd = target - eye;
    require(length(fwd) > 0.0, "look_at: eye and target coincide");
    Pose p;
    p.position = eye;
    p.forward = normalize(fwd);
    Vec3 down = up * -1.0;
    down = down - p.forward * dot(down, p.forward);
    if (length(down) < 1e-9) {
        const Vec3 alt = std::abs(p.forward.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 0.0, 1.0};
        down = alt - p.forward * dot(alt, p.forward);
    }
    p.down = normalize(down);
    p.right = cross(p.down, p.forward);
    return p;
}

Ray camera_ray(const PinholeCamera& cam, double px, double py)
{
    const double x = (px - 0.5 * cam.width) * cam.pixel_size_mm;
    const double y = (py - 0.5 * cam.height) * cam.pixel_size_mm;
    return {cam.pose.position, normalize(cam.pose.to_world({x, y, cam.focal_length_mm}))};
}

std::optional<FaceHit> intersect_face(const Face& face, const Ray& ray, double t_min, double t_max)
{
    const Vec3 n = face.normal();
    const double denom = dot(ray.dir, n);
    if (std::abs(denom) < 1e-15) return std::nullopt;
    const double t = dot(face.origin - ray.origin, n) / denom;
    if (!(t > t_min && t < t_max)) return std::nullopt;
    const Vec3 p = ray.origin + ray.dir * t - face.origin;
    const double s = dot(p, face.u), tt = dot(p, face.v);
    if (s < 0.0 || s > face.width_mm || tt < 0.0 || tt > face.height_mm) return std::nullopt;
    return FaceHit{t, s, tt, denom < 0.0};
}

std::vector<double> polynomial_roots(const std::vector<double>& coeffs, double lo, double hi)
{
    require(coeffs.size() <= kMaxDegree + 1, "polynomial_roots: degree above 16");
    double out[kMaxDegree];
    const std::size_t n = roots_in(coeffs.data(), coeffs.size(), lo, hi, out);
    return {out, out + n};
}

std::optional<double> intersect_torus(const Torus& torus, const Ray& ray, double t_min, double t_max)
{
    const double R = torus.major, r = torus.minor;
    const double bound = R + r;

    // Clip to the bounding sphere and re-base the ray there, which keeps the
    // quartic coefficients well scaled.
    const Vec3 p0 = ray.origin - torus.center;
    const double e0 = dot(p0, ray.dir);
    const double disc = e0 * e0 - (dot(p0, p0) - bound * bound);
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    double t_enter = std::max(t_min, -e0 - sq);
    double t_exit = std::min(t_max, -e0 + sq);
    if (!(t_enter < t_exit)) return std::nullopt;

    // The torus lies in the slab |h| <= r around its plane.
    const double h0 = dot(p0, torus.axis), dh = dot(ray.dir, torus.axis);
    if (dh != 0.0) {
        const double ta = (-r - h0) / dh, tb = (r - h0) / dh;
        t_enter = std::max(t_enter, std::min(ta, tb));
        t_exit = std::min(t_exit, std::max(ta, tb));
        if (!(t_enter < t_exit)) return std::nullopt;
    } else if (std::abs(h0) > r) {
        return std::nullopt;
    }
    // Distance to the axis is convex along the ray, so a segment whose end
    // points are both inside the hole cylinder cannot reach the tube.
    auto axis_dist = [&](double t) {
        const Vec3 q = p0 + ray.dir * t;
        return length(q - torus.axis * dot(q, torus.axis));
    };
    if (axis_dist(t_enter) < R - r && axis_dist(t_exit) < R - r) return std::nullopt;

    const Vec3 p = p0 + ray.dir * t_enter;
    const Vec3& d = ray.dir;
    const double pz = dot(p, torus.axis), dz = dot(d, torus.axis);
    const double pp = dot(p, p), e = dot(p, d);
    const double k = pp + R * R - r * r;
    const double pd_xy = e - pz * dz;
    const double dd_xy = 1.0 - dz * dz;
    const double pp_xy = pp - pz * pz;
    const double four_r2 = 4.0 * R * R;

    const double coeffs[5] = {k * k - four_r2 * pp_xy, 4.0 * e * k - 2.0 * four_r2 * pd_xy,
                              4.0 * e * e + 2.0 * k - four_r2 * dd_xy, 4.0 * e, 1.0};
    double roots[4];
    const std::size_t n = roots_in(coeffs, 5, 0.0, t_exit - t_enter, roots);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t_enter + roots[i];
        if (t > t_min && t < t_max) return t;
    }
    return std::nullopt;
}

Torus light_torus(const PinholeCamera& cam, const RingLight& light)
{
    return {cam.pose.position, cam.pose.forward, light.major_radius_mm, light.minor_radius_mm};
}

}  // namespace surfsynth::render
