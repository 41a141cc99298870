#include "fovea/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "fovea/error.hpp"

namespace fovea {

std::string_view to_string(SpawnMode mode) noexcept {
  return mode == SpawnMode::Foveated ? "foveated" : "uniform";
}

SpawnMode parse_spawn_mode(std::string_view text) {
  if (text == "foveated") return SpawnMode::Foveated;
  if (text == "uniform") return SpawnMode::Uniform;
  throw Error(ErrorCode::InvalidSpec, "unknown mode '" + std::string(text) + "'");
}

std::vector<GroundTruthObject> ManifestEntry::training_objects() const {
  std::vector<GroundTruthObject> out;
  std::copy_if(objects.begin(), objects.end(), std::back_inserter(out),
               [](const GroundTruthObject& o) { return !o.degenerate; });
  return out;
}

const ManifestEntry* DatasetManifest::find(std::string_view file) const {
  const auto it = std::find_if(entries.begin(), entries.end(),
                               [&](const ManifestEntry& e) { return e.file == file; });
  return it == entries.end() ? nullptr : &*it;
}

std::string spawned_file_name(std::int64_t image_id, std::int64_t ann_id, ImageDims target) {
  return std::to_string(image_id) + "_" + std::to_string(ann_id) + "_" +
         std::to_string(target.width) + "x" + std::to_string(target.height) + ".png";
}

PixelPoint fovea_center(const BBox& source_box, ImageDims source) {
  const BBox c = clamp_to(source_box, source);
  const auto pick = [](double lo, double extent, int limit) {
    return std::clamp(static_cast<int>(std::floor(lo + extent / 2.0)), 0, limit - 1);
  };
  return {pick(c.x, c.w, source.width), pick(c.y, c.h, source.height)};
}

std::vector<ImageDims> default_sizes() {
  std::vector<ImageDims> sizes;
  for (int s = 96; s <= 416; s += 32) sizes.push_back({s, s});
  return sizes;
}

SampleGrid entry_grid(const ManifestEntry& entry, BudgetPolicy policy) {
  return build_grid({entry.source, entry.target, entry.center}, policy);
}

namespace {

struct ImageResult {
  // Indexed by size.
  std::vector<std::vector<ManifestEntry>> entries;
  std::vector<std::vector<SpawnFailure>> failures;
};

std::string dims_str(ImageDims d) {
  return std::to_string(d.width) + "x" + std::to_string(d.height);
}

void spawn_one_size(const CocoImage& image, std::span<const CocoAnnotation> anns,
                    const RasterImage& raster, ImageDims target, SpawnMode mode,
                    const ImageSink& sink, const SpawnOptions& options,
                    std::vector<ManifestEntry>& entries, std::vector<SpawnFailure>& failures) {
  if (target.width > image.dims.width || target.height > image.dims.height) {
    failures.push_back({image.id, image.file_name,
                        "target " + dims_str(target) + " exceeds source " + dims_str(image.dims)});
    return;
  }
  std::vector<ManifestEntry> local;
  try {
    if (mode == SpawnMode::Uniform) {
      const RasterImage small = uniform_downsample(raster, target);
      for (const auto& focus : anns) {
        ManifestEntry e;
        e.file = spawned_file_name(image.id, focus.id, target);
        e.image_id = image.id;
        e.fovea_ann_id = focus.id;
        e.source = image.dims;
        e.target = target;
        e.center = fovea_center(focus.bbox, image.dims);
        for (const auto& a : anns) {
          const MappedBox m = scale_bbox(a.bbox, image.dims, target, Space::Target);
          e.objects.push_back({a.id, a.category_id, m.box, clamp_to(a.bbox, image.dims),
                               a.id == focus.id, m.degenerate});
        }
        if (sink) sink(e, small);
        local.push_back(std::move(e));
      }
    } else {
      for (const auto& focus : anns) {
        ManifestEntry e;
        e.file = spawned_file_name(image.id, focus.id, target);
        e.image_id = image.id;
        e.fovea_ann_id = focus.id;
        e.source = image.dims;
        e.target = target;
        e.center = fovea_center(focus.bbox, image.dims);
        const SampleGrid grid = build_grid({image.dims, target, e.center}, options.policy);
        for (const auto& a : anns) {
          const MappedBox m = map_bbox(grid, a.bbox);
          e.objects.push_back({a.id, a.category_id, m.box, clamp_to(a.bbox, image.dims),
                               a.id == focus.id, m.degenerate});
        }
        if (sink) sink(e, foveate_image(raster, grid));
        local.push_back(std::move(e));
      }
    }
  } catch (const Error& err) {
    failures.push_back({image.id, image.file_name, err.what()});
    return;
  }
  for (auto& e : local) entries.push_back(std::move(e));
}

std::vector<DatasetManifest> spawn_all(const CocoSubset& subset, std::span<const ImageDims> sizes,
                                       SpawnMode mode, const ImageLoader& loader,
                                       const ImageSink& sink, const SpawnOptions& options) {
  const std::size_t n_images = subset.images.size();
  std::vector<ImageResult> results(n_images);

  auto process = [&](std::size_t i) {
    const CocoImage& image = subset.images[i];
    ImageResult& r = results[i];
    r.entries.resize(sizes.size());
    r.failures.resize(sizes.size());
    RasterImage raster;
    std::string load_error;
    try {
      raster = loader(image);
      if (raster.dims() != image.dims) {
        load_error = "decoded " + dims_str(raster.dims()) + " but annotations declare " +
                     dims_str(image.dims);
      }
    } catch (const std::exception& err) {
      load_error = err.what();
    }
    const auto anns = subset.annotations_of(image.id);
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      if (!load_error.empty()) {
        r.failures[s].push_back({image.id, image.file_name, load_error});
        continue;
      }
      spawn_one_size(image, anns, raster, sizes[s], mode, sink, options, r.entries[s],
                     r.failures[s]);
    }
  };

  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(n_images)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n_images; ++i) process(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n_images; i = next++) process(i);
      });
    }
  }

  std::vector<DatasetManifest> out(sizes.size());
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    out[s].mode = mode;
    out[s].target = sizes[s];
    for (auto& r : results) {
      for (auto& e : r.entries[s]) out[s].entries.push_back(std::move(e));
      for (auto& f : r.failures[s]) out[s].failures.push_back(std::move(f));
    }
  }
  return out;
}

}  // namespace

DatasetManifest spawn_foveated(const CocoSubset& subset, ImageDims target, const ImageLoader& loader,
                               const ImageSink& sink, const SpawnOptions& options) {
  const ImageDims sizes[] = {target};
  return std::move(spawn_all(subset, sizes, SpawnMode::Foveated, loader, sink, options).front());
}

DatasetManifest spawn_uniform(const CocoSubset& subset, ImageDims target, const ImageLoader& loader,
                              const ImageSink& sink, const SpawnOptions& options) {
  const ImageDims sizes[] = {target};
  return std::move(spawn_all(subset, sizes, SpawnMode::Uniform, loader, sink, options).front());
}

std::vector<DatasetManifest> size_sweep(const CocoSubset& subset, std::span<const ImageDims> sizes,
                                        SpawnMode mode, const ImageLoader& loader,
                                        const ImageSink& sink, const SpawnOptions& options) {
  if (sizes.empty()) throw Error(ErrorCode::InvalidSpec, "size sweep needs at least one size");
  return spawn_all(subset, sizes, mode, loader, sink, options);
}

}  // namespace fovea
