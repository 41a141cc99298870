#pragma once

#include <cstdint>

#include "fovea/grid.hpp"

namespace fovea {

enum class Space { Source, Target };

/// Axis-aligned box covering the half-open span [x, x + w) x [y, y + h).
/// A pixel belongs to the box when its (integer) center does.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
  Space space = Space::Source;

  double right() const noexcept { return x + w; }
  double bottom() const noexcept { return y + h; }
  double area() const noexcept { return w > 0 && h > 0 ? w * h : 0.0; }
  bool operator==(const BBox&) const = default;
};

struct GroundTruthObject {
  std::int64_t ann_id = 0;
  int class_id = 0;
  /// Box in the manifest's target space.
  BBox bbox;
  /// The same object in source-image coordinates (clamped to the image).
  BBox source_bbox;
  /// True for the single object the image's fovea is centred on.
  bool is_foveal = false;
  /// Transformed extent collapsed below one pixel.
  bool degenerate = false;
};

/// Intersects `b` with [0, dims.width) x [0, dims.height); may return an
/// empty box.
BBox clamp_to(const BBox& b, ImageDims dims);

/// Intersection over union. Throws SpaceMismatch for boxes in different spaces.
double iou(const BBox& a, const BBox& b);

struct MappedBox {
  BBox box;
  bool degenerate = false;
};

/// Source box to target box: the target pixels whose source sample lies in
/// the (clamped) box. `degenerate` when no sample survives on some axis.
/// Throws SpaceMismatch, or OutOfBounds if the box misses the image.
MappedBox map_bbox(const SampleGrid& grid, const BBox& source_box);

/// map_bbox that throws DegenerateBox instead of flagging.
BBox transform_bbox(const SampleGrid& grid, const BBox& source_box);

/// Target box to the largest source box that transforms back to it, so the
/// result contains any pixel-aligned source box with the same image.
/// Throws SpaceMismatch, OutOfBounds, or DegenerateBox when the box covers
/// no target pixel.
BBox inverse_transform_bbox(const SampleGrid& grid, const BBox& target_box);

/// Region where pixel-aligned boxes survive transform + inverse exactly:
/// any box with x0 <= x, x + w <= x1 (same for y).
PixelRect exact_roundtrip_window(const SampleGrid& grid);

/// Linear rescaling between two image sizes (uniform baseline). Flags boxes
/// whose scaled width or height falls below one pixel.
MappedBox scale_bbox(const BBox& b, ImageDims from, ImageDims to, Space to_space);

}  // namespace fovea
