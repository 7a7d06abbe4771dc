// Copyright 2026 The surfsynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "surfsynth/dataset.hpp"
#include "surfsynth/defects.hpp"
#include "surfsynth/metrics.hpp"
#include "surfsynth/milling.hpp"
#include "surfsynth/render.hpp"
#include "surfsynth/sandblast.hpp"

namespace surfsynth::io {

using json = nlohmann::json;

// Readers overlay the keys present in `j` onto `out`; absent keys keep their
// current values and unknown keys raise Errc::parse.

json to_json(const milling::MillingParams& p);
void from_json(const json& j, milling::MillingParams& out);

json to_json(const sandblast::SandblastParams& p);
void from_json(const json& j, sandblast::SandblastParams& out);

json to_json(const defects::DefectSpec& s);
void from_json(const json& j, defects::DefectSpec& out);
std::vector<defects::DefectSpec> defect_specs_from_json(const json& j);

json to_json(const defects::DefectInstance& d);

json to_json(const dataset::TextureRandomization& r);
void from_json(const json& j, dataset::TextureRandomization& out);

json to_json(const dataset::DatasetConfig& c);
void from_json(const json& j, dataset::DatasetConfig& out);

json to_json(const dataset::DatasetManifest& m);

json to_json(const metrics::SimilarityReport& r);

/// Scene description. Face entries may name a height grid ("height") and a
/// label PNG ("labels"), resolved relative to `base_dir`. The camera pose is
/// given as {"eye", "target", "up"}.
render::Scene scene_from_json(const json& j, const std::filesystem::path& base_dir);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace surfsynth::io
