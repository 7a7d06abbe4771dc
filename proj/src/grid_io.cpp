// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "surfsynth/grid_io.hpp"

#include <array>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "surfsynth/png_io.hpp"

namespace surfsynth {

static_assert(std::endian::native == std::endian::little,
              "grid container I/O assumes a little-endian host");

namespace {

constexpr std::array<char, 4> kMagic{'S', 'Y', 'N', 'H'};
constexpr std::uint32_t kVersion = 1;
constexpr double kMicronsPerMm = 1000.0;

struct XyzPoint {
    double x, y, z;
    std::size_t line;
};

bool near_equal(double a, double b, double scale)
{
    return std::abs(a - b) <= 1e-6 * scale;
}

std::vector<XyzPoint> parse_xyz(std::istream& in, const std::string& name)
{
    std::vector<XyzPoint> points;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        const std::size_t this_line = line_no++;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const char* p = line.c_str();
        double v[3];
        for (double& out : v) {
            char* end = nullptr;
            errno = 0;
            out = std::strtod(p, &end);
            if (end == p)
                throw Error(Errc::parse,
                            name + ": malformed xyz record on line " + std::to_string(this_line),
                            points.size());
            p = end;
        }
        if (std::isnan(v[2]))
            throw Error(Errc::parse, name + ": NaN height on line " + std::to_string(this_line),
                        points.size());
        if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2]))
            throw Error(Errc::parse,
                        name + ": non-finite value on line " + std::to_string(this_line),
                        points.size());
        points.push_back({v[0], v[1], v[2], this_line});
    }
    return points;
}

HeightField grid_from_points(const std::vector<XyzPoint>& pts, const std::string& name)
{
    if (pts.empty()) throw Error(Errc::parse, name + ": no xyz records");
    std::size_t cols = 1;
    while (cols < pts.size() && pts[cols].y == pts[0].y) ++cols;
    if (cols == pts.size() || cols < 2)
        throw Error(Errc::parse, name + ": degenerate grid (cannot infer both spacings)");
    if (pts.size() % cols != 0)
        throw Error(Errc::parse, name + ": irregular grid, incomplete last row",
                    pts.size() / cols);
    const std::size_t rows = pts.size() / cols;

    const double dx = (pts[cols - 1].x - pts[0].x) / static_cast<double>(cols - 1);
    const double dy = (pts[(rows - 1) * cols].y - pts[0].y) / static_cast<double>(rows - 1);
    if (dx == 0.0 || dy == 0.0) throw Error(Errc::parse, name + ": degenerate grid (zero spacing)");
    if (!near_equal(std::abs(dx), std::abs(dy), std::abs(dx)))
        throw Error(Errc::parse, name + ": anisotropic pixel spacing is not supported");

    std::vector<double> heights(pts.size());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const XyzPoint& p = pts[r * cols + c];
            const bool x_ok = c == 0 ? near_equal(p.x, pts[0].x, std::abs(dx))
                                     : near_equal(p.x - pts[r * cols + c - 1].x, dx, std::abs(dx));
            const bool y_ok = r == 0 ? near_equal(p.y, pts[0].y, std::abs(dy))
                                     : near_equal(p.y - pts[(r - 1) * cols + c].y, dy, std::abs(dy));
            if (!x_ok || !y_ok)
                throw Error(Errc::parse,
                            name + ": irregular grid at data row " + std::to_string(r) +
                                " (file line " + std::to_string(p.line) + ")",
                            r);
            heights[r * cols + c] = p.z / kMicronsPerMm;
        }
    }
    return HeightField(rows, cols, std::abs(dx) / kMicronsPerMm, std::move(heights));
}

// Finds a micrometer value that converts back to exactly `mm`.
double exact_microns(double mm)
{
    double um = mm * kMicronsPerMm;
    if (um / kMicronsPerMm == mm) return um;
    double lo = um, hi = um;
    for (int i = 0; i < 8; ++i) {
        lo = std::nextafter(lo, -INFINITY);
        hi = std::nextafter(hi, INFINITY);
        if (lo / kMicronsPerMm == mm) return lo;
        if (hi / kMicronsPerMm == mm) return hi;
    }
    return um;
}

template <class T>
void put(std::ostream& out, T value)
{
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
bool get(std::istream& in, T& value)
{
    return static_cast<bool>(in.read(reinterpret_cast<char*>(&value), sizeof(T)));
}

std::filesystem::path sidecar_path(const std::filesystem::path& png)
{
    return std::filesystem::path(png.string() + ".json");
}

}  // namespace

HeightField load_topography(const std::filesystem::path& path, TopographyFormat format)
{
    if (format == TopographyFormat::grid_container) return read_grid(path);
    std::ifstream in(path);
    if (!in) fail(Errc::io, "cannot open '" + path.string() + "'");
    return grid_from_points(parse_xyz(in, path.string()), path.string());
}

void write_xyz(const std::filesystem::path& path, const HeightField& hf)
{
    std::ofstream out(path);
    if (!out) fail(Errc::io, "cannot open '" + path.string() + "' for writing");
    const double step = hf.spacing_mm() * kMicronsPerMm;
    char buf[96];
    for (std::size_t r = 0; r < hf.rows(); ++r) {
        for (std::size_t c = 0; c < hf.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", static_cast<double>(c) * step,
                          static_cast<double>(r) * step, exact_microns(hf(r, c)));
            out << buf;
        }
    }
    if (!out) fail(Errc::io, "write to '" + path.string() + "' failed");
}

void write_grid(const std::filesystem::path& path, const HeightField& hf)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io, "cannot open '" + path.string() + "' for writing");
    out.write(kMagic.data(), kMagic.size());
    put(out, kVersion);
    put(out, static_cast<std::uint32_t>(hf.rows()));
    put(out, static_cast<std::uint32_t>(hf.cols()));
    put(out, hf.spacing_mm());
    std::vector<float> payload(hf.size());
    for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<float>(hf.values()[i]);
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * sizeof(float)));
    if (!out) fail(Errc::io, "write to '" + path.string() + "' failed");
}

HeightField read_grid(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io, "cannot open '" + path.string() + "'");
    std::array<char, 4> magic{};
    std::uint32_t version = 0, rows = 0, cols = 0;
    double spacing = 0.0;
    if (!in.read(magic.data(), magic.size()) || magic != kMagic)
        fail(Errc::parse, "'" + path.string() + "': bad magic number (expected SYNH)");
    if (!get(in, version) || version != kVersion)
        fail(Errc::parse, "'" + path.string() + "': unsupported grid container version");
    if (!get(in, rows) || !get(in, cols) || !get(in, spacing))
        fail(Errc::parse, "'" + path.string() + "': truncated header");
    if (rows == 0 || cols == 0 || !(spacing > 0.0) || !std::isfinite(spacing))
        fail(Errc::parse, "'" + path.string() + "': invalid header values");

    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    std::vector<float> payload(n);
    if (!in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(n * sizeof(float))))
        fail(Errc::parse, "'" + path.string() + "': truncated payload");
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(payload[i]))
            throw Error(Errc::parse, "'" + path.string() + "': non-finite height", i / cols);
        values[i] = payload[i];
    }
    return HeightField(rows, cols, spacing, std::move(values));
}

void write_height_png16(const std::filesystem::path& path, const HeightField& hf)
{
    const FieldStats s = compute_stats(hf);
    const double range = s.max - s.min;
    Grid<std::uint16_t> q(hf.rows(), hf.cols());
    for (std::size_t i = 0; i < hf.size(); ++i) {
        const double t = range > 0.0 ? (hf.values()[i] - s.min) / range : 0.0;
        q.values()[i] = static_cast<std::uint16_t>(std::lround(t * 65535.0));
    }
    write_png16(path, q);

    nlohmann::json meta{{"min", s.min}, {"max", s.max}, {"spacing_mm", hf.spacing_mm()}};
    std::ofstream out(sidecar_path(path));
    if (!out) fail(Errc::io, "cannot write sidecar for '" + path.string() + "'");
    out << meta.dump(2) << '\n';
}

HeightField read_height_png16(const std::filesystem::path& path)
{
    std::ifstream in(sidecar_path(path));
    if (!in) fail(Errc::io, "missing sidecar '" + sidecar_path(path).string() + "'");
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::parse, "sidecar of '" + path.string() + "': " + e.what());
    }
    const double lo = meta.at("min").get<double>();
    const double hi = meta.at("max").get<double>();
    const double spacing = meta.at("spacing_mm").get<double>();
    const auto q = read_png16(path);
    std::vector<double> values(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        values[i] = lo + (hi - lo) * (static_cast<double>(q.values()[i]) / 65535.0);
    return HeightField(q.rows(), q.cols(), spacing, std::move(values));
}

}  // namespace surfsynth
