#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fovea/dataset.hpp"

namespace fovea {

/// One JSON object per line, one line per entry:
///
///   {"file":..., "mode":"foveated", "image_id":..., "fovea_ann_id":...,
///    "source":[W,H], "target":[W,H], "center":[x,y],
///    "objects":[{"ann_id":..., "class_id":..., "bbox":[x,y,w,h],
///                "source_bbox":[x,y,w,h], "is_foveal":bool,
///                "degenerate":bool}, ...]}
std::string entry_to_json_line(const ManifestEntry& entry, SpawnMode mode);

void write_manifest(const DatasetManifest& manifest, std::ostream& out);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Failures as JSON lines: {"image_id":..., "file_name":..., "reason":...}.
void write_failures(const DatasetManifest& manifest, std::ostream& out);

/// Throws MalformedJson / MissingField on bad lines (message carries the line
/// number). An empty stream yields an empty manifest.
DatasetManifest read_manifest(std::istream& in);
DatasetManifest read_manifest(const std::filesystem::path& path);

}  // namespace fovea
