#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fovea/grid.hpp"

namespace fovea {

/// 8-bit raster, row-major with interleaved channels (1 = gray, 3 = RGB).
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(ImageDims dims, int channels);
  RasterImage(ImageDims dims, int channels, std::vector<std::uint8_t> pixels);

  ImageDims dims() const noexcept { return dims_; }
  int width() const noexcept { return dims_.width; }
  int height() const noexcept { return dims_.height; }
  int channels() const noexcept { return channels_; }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  std::uint8_t at(int x, int y, int c = 0) const {
    return pixels_[(static_cast<std::size_t>(y) * dims_.width + x) * channels_ + c];
  }
  std::uint8_t& at(int x, int y, int c = 0) {
    return pixels_[(static_cast<std::size_t>(y) * dims_.width + x) * channels_ + c];
  }

  bool operator==(const RasterImage&) const = default;

 private:
  ImageDims dims_;
  int channels_ = 1;
  std::vector<std::uint8_t> pixels_;
};

/// Separable nearest-sample gather: output (i, j) = source (xs[i], ys[j]).
/// Throws DimensionMismatch when the grid was built for other source dims.
RasterImage foveate_image(const RasterImage& img, const SampleGrid& grid);

/// Source indices chosen by evenly spaced (center-aligned) nearest sampling
/// of `length` pixels down to `target`.
std::vector<int> uniform_indices(int length, int target);

/// Linear-baseline downsampling with the same gather as foveate_image.
RasterImage uniform_downsample(const RasterImage& img, ImageDims target);

/// Gather with arbitrary per-axis source indices. Throws OutOfBounds for
/// indices outside the image.
RasterImage gather(const RasterImage& img, std::span<const int> xs, std::span<const int> ys);

}  // namespace fovea
