#include "fovea/raster.hpp"

#include <algorithm>
#include <string>

#include "fovea/error.hpp"

namespace fovea {

namespace {

void check_shape(ImageDims dims, int channels) {
  if (dims.width <= 0 || dims.height <= 0) {
    throw Error(ErrorCode::DimensionMismatch, "image dims must be positive");
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::DimensionMismatch,
                "channels must be 1 or 3, got " + std::to_string(channels));
  }
}

}  // namespace

RasterImage::RasterImage(ImageDims dims, int channels)
    : dims_(dims), channels_(channels) {
  check_shape(dims, channels);
  pixels_.assign(static_cast<std::size_t>(dims.area()) * channels, 0);
}

RasterImage::RasterImage(ImageDims dims, int channels, std::vector<std::uint8_t> pixels)
    : dims_(dims), channels_(channels), pixels_(std::move(pixels)) {
  check_shape(dims, channels);
  if (pixels_.size() != static_cast<std::size_t>(dims.area()) * channels) {
    throw Error(ErrorCode::DimensionMismatch,
                "pixel buffer holds " + std::to_string(pixels_.size()) + " bytes, expected " +
                    std::to_string(dims.area() * channels));
  }
}

RasterImage gather(const RasterImage& img, std::span<const int> xs, std::span<const int> ys) {
  for (int x : xs) {
    if (x < 0 || x >= img.width()) {
      throw Error(ErrorCode::OutOfBounds, "column " + std::to_string(x) + " outside image");
    }
  }
  for (int y : ys) {
    if (y < 0 || y >= img.height()) {
      throw Error(ErrorCode::OutOfBounds, "row " + std::to_string(y) + " outside image");
    }
  }
  const int c = img.channels();
  RasterImage out({static_cast<int>(xs.size()), static_cast<int>(ys.size())}, c);
  const auto src = img.pixels();
  auto dst = out.pixels();
  const std::size_t src_stride = static_cast<std::size_t>(img.width()) * c;
  std::size_t o = 0;
  for (int y : ys) {
    const std::uint8_t* row = src.data() + static_cast<std::size_t>(y) * src_stride;
    if (c == 1) {
      for (int x : xs) dst[o++] = row[x];
    } else {
      for (int x : xs) {
        const std::uint8_t* p = row + static_cast<std::size_t>(x) * 3;
        dst[o++] = p[0];
        dst[o++] = p[1];
        dst[o++] = p[2];
      }
    }
  }
  return out;
}

RasterImage foveate_image(const RasterImage& img, const SampleGrid& grid) {
  if (img.dims() != grid.spec().source) {
    const auto& s = grid.spec().source;
    throw Error(ErrorCode::DimensionMismatch,
                "grid expects " + std::to_string(s.width) + "x" + std::to_string(s.height) +
                    " source, image is " + std::to_string(img.width()) + "x" +
                    std::to_string(img.height()));
  }
  return gather(img, grid.xs(), grid.ys());
}

std::vector<int> uniform_indices(int length, int target) {
  if (target <= 0 || target > length) {
    throw Error(ErrorCode::DimensionMismatch, "cannot downsample " + std::to_string(length) +
                                                  " pixels to " + std::to_string(target));
  }
  std::vector<int> idx(target);
  for (int i = 0; i < target; ++i) {
    idx[i] = static_cast<int>((std::int64_t{2} * i + 1) * length / (std::int64_t{2} * target));
  }
  return idx;
}

RasterImage uniform_downsample(const RasterImage& img, ImageDims target) {
  const auto xs = uniform_indices(img.width(), target.width);
  const auto ys = uniform_indices(img.height(), target.height);
  return gather(img, xs, ys);
}

}  // namespace fovea
