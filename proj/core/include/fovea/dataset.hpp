#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fovea/bbox.hpp"
#include "fovea/coco.hpp"
#include "fovea/grid.hpp"
#include "fovea/raster.hpp"

namespace fovea {

enum class SpawnMode { Foveated, Uniform };

std::string_view to_string(SpawnMode mode) noexcept;
SpawnMode parse_spawn_mode(std::string_view text);

/// One spawned image: the source image resampled around one of its objects.
struct ManifestEntry {
  std::string file;
  std::int64_t image_id = 0;
  std::int64_t fovea_ann_id = 0;
  ImageDims source;
  ImageDims target;
  PixelPoint center;
  /// Every object of the source image, in target space; exactly one has
  /// is_foveal set.
  std::vector<GroundTruthObject> objects;

  /// Objects usable as training labels (degenerate boxes excluded).
  std::vector<GroundTruthObject> training_objects() const;
};

struct SpawnFailure {
  std::int64_t image_id = 0;
  std::string file_name;
  std::string reason;
};

struct DatasetManifest {
  SpawnMode mode = SpawnMode::Foveated;
  ImageDims target;
  std::vector<ManifestEntry> entries;
  std::vector<SpawnFailure> failures;

  const ManifestEntry* find(std::string_view file) const;
};

using ImageLoader = std::function<RasterImage(const CocoImage&)>;
/// Receives each spawned image. Called from worker threads when
/// SpawnOptions::workers > 1, so it must be safe for concurrent calls.
using ImageSink = std::function<void(const ManifestEntry&, const RasterImage&)>;

struct SpawnOptions {
  int workers = 1;
  BudgetPolicy policy = BudgetPolicy::Rebalance;
};

/// `<image_id>_<ann_id>_<W>x<H>.png`
std::string spawned_file_name(std::int64_t image_id, std::int64_t ann_id, ImageDims target);

/// Fovea placed at the pixel holding the center of the (clamped) box.
PixelPoint fovea_center(const BBox& source_box, ImageDims source);

/// One foveated image per annotation, fovea on that annotation. Load
/// failures and infeasible sizes are collected in `failures`, not thrown.
DatasetManifest spawn_foveated(const CocoSubset& subset, ImageDims target, const ImageLoader& loader,
                               const ImageSink& sink = {}, const SpawnOptions& options = {});

/// One uniformly downsampled copy per annotation, boxes scaled linearly.
DatasetManifest spawn_uniform(const CocoSubset& subset, ImageDims target, const ImageLoader& loader,
                              const ImageSink& sink = {}, const SpawnOptions& options = {});

/// 96x96 through 416x416 in steps of 32.
std::vector<ImageDims> default_sizes();

/// One manifest per size, in the order given; each source image is loaded
/// once for all sizes.
std::vector<DatasetManifest> size_sweep(const CocoSubset& subset, std::span<const ImageDims> sizes,
                                        SpawnMode mode, const ImageLoader& loader,
                                        const ImageSink& sink = {}, const SpawnOptions& options = {});

/// Grid that produced a foveated entry.
SampleGrid entry_grid(const ManifestEntry& entry, BudgetPolicy policy = BudgetPolicy::Rebalance);

}  // namespace fovea
