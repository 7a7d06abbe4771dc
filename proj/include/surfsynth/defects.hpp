// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "surfsynth/grid.hpp"
#include "surfsynth/vec.hpp"

namespace surfsynth::defects {

enum class DefectKind { small_dent, big_dent, flat_scratch, curvy_scratch };

/// Class labels as written into mask PNGs.
enum class DefectClass : std::uint8_t { dent = 1, scratch = 2 };

std::string to_string(DefectKind kind);
DefectKind parse_defect_kind(const std::string& name);
DefectClass class_of(DefectKind kind);
bool is_scratch(DefectKind kind);

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// One row of the defect table. Lengths in millimeters; curviness is the
/// standard deviation of the per-step heading change in radians.
struct DefectSpec {
    DefectKind kind = DefectKind::small_dent;
    int quantity = 0;
    Range diameter_mm;
    Range elongation{1.0, 1.0};
    Range depth_mm;
    Range path_length_mm;
    double step_size_mm = 0.0;
    double curviness = 0.0;
};

void validate(const DefectSpec& spec);

/// The four defect types with their default quantities and ranges.
std::vector<DefectSpec> default_defect_specs();

enum class PositionDistribution { uniform, normal };

/// Extent of a planar face in millimeters.
struct FaceExtent {
    double width_mm = 0.0;
    double height_mm = 0.0;
};

/// Sampled defect parameters; tools are built on demand from these.
struct DefectInstance {
    DefectKind kind = DefectKind::small_dent;
    DefectClass label = DefectClass::dent;
    std::size_t face = 0;
    Vec2 position;            // mm, face coordinates (x right, y down)
    double diameter_mm = 0.0;
    double elongation = 1.0;  // dents
    double depth_mm = 0.0;    // dents
    double rotation_rad = 0.0;
    double path_length_mm = 0.0;  // scratches
    double step_size_mm = 0.0;
    double curviness = 0.0;
    std::uint64_t walk_seed = 0;
};

/// Draws `quantity` instances per spec. Each instance lands on a face chosen
/// with probability proportional to its area, at a position drawn from the
/// given distribution (normal: centered, std = extent / 6, truncated to the face).
std::vector<DefectInstance> sample_defect_set(const std::vector<DefectSpec>& specs,
                                              const std::vector<FaceExtent>& faces,
                                              PositionDistribution distribution, std::uint64_t seed);

/// Depth patch of a tool: values <= 0 inside the support and 0 elsewhere.
/// (anchor_row, anchor_col) is the pixel placed over the defect position.
struct ToolPatch {
    Grid<double> depth;
    double spacing_mm = 0.0;
    std::size_t anchor_row = 0;
    std::size_t anchor_col = 0;

    bool in_support(std::size_t r, std::size_t c) const { return depth(r, c) < 0.0; }
};

/// Ellipsoidal cap with semi-axes diameter/2 (x) and diameter*elongation/2 (y)
/// rotated by `rotation_rad`; apex depth `depth_mm` at the anchor pixel.
ToolPatch dent_tool(double diameter_mm, double elongation, double depth_mm, double rotation_rad,
                    double spacing_mm);

struct ScratchTool {
    ToolPatch patch;
    std::vector<Vec2> polyline;  // mm, relative to the anchor
};

/// Random-walk groove: heading changes by Normal(0, curviness) per step,
/// steps of `step_size_mm` (the last one truncated) until `path_length_mm`.
/// Cross-section is an elliptic arc of half-width diameter/2 and depth
/// depth_ratio * diameter (0.5 gives a semicircle).
ScratchTool scratch_tool(double path_length_mm, double step_size_mm, double diameter_mm, double curviness,
                         std::uint64_t seed, double spacing_mm, double depth_ratio = 0.5);

ToolPatch build_tool(const DefectInstance& inst, double spacing_mm, double scratch_depth_ratio = 0.5);

struct ImprintResult {
    HeightField surface;
    Mask solid;   // 1 where material was removed
    Mask shell;   // shrunken tool support intersected with solid
    bool applied = false;  // false when the tool misses the surface entirely
};

struct ImprintOptions {
    double shell_shrink = 0.95;  // in [0.9, 1.0]
    double rim_fraction = 0.0;   // raised rim height as a fraction of tool depth
};

/// new = min(old, h(anchor) + tool) inside the tool support, placed with the
/// anchor over `position_mm` (x = col * spacing, y = row * spacing).
ImprintResult imprint_with_masks(const HeightField& surface, const ToolPatch& tool, Vec2 position_mm,
                                 const ImprintOptions& options = {});

}  // namespace surfsynth::defects
