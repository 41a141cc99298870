#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fovea/grid.hpp"
#include "fovea/raster.hpp"

namespace fovea {

enum class BenchOp { Foveate, Uniform };

struct BenchConfig {
  ImageDims source{640, 480};
  std::vector<ImageDims> sizes;
  int repetitions = 100;
  int warmup = 10;
  std::uint64_t seed = 1;
  BenchOp op = BenchOp::Foveate;
  /// Build each grid once (cached by FoveaSpec) instead of per image.
  bool reuse_grid = true;
  /// > 1 runs the loop on that many threads and reports aggregate throughput.
  int workers = 1;
  int channels = 3;
  /// Distinct synthetic images (and fovea centers) cycled through.
  int image_pool = 4;
};

struct BenchResult {
  std::string operation;
  ImageDims target;
  std::int64_t images = 0;
  double wall_seconds = 0.0;
  double mean_us = 0.0;
  double median_us = 0.0;
  double images_per_s = 0.0;
};

/// Deterministic noise image for a seed.
RasterImage synthetic_image(ImageDims dims, int channels, std::uint64_t seed);

/// Times the transform for each size; warmup iterations are excluded.
/// Single-threaded runs interleave the sizes within each repetition, and
/// wall_seconds is the time spent on that size. Results are sorted by
/// target pixel count. Throws InvalidSpec when repetitions < 1.
std::vector<BenchResult> run_bench(const BenchConfig& config);

/// CSV with header operation,width,height,images,mean_us,median_us,images_per_s.
void write_bench_csv(std::span<const BenchResult> results, std::ostream& out);

}  // namespace fovea
