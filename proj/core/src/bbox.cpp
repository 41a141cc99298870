#include "fovea/bbox.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fovea/error.hpp"

namespace fovea {

namespace {

const char* space_name(Space s) { return s == Space::Source ? "source" : "target"; }

void require_space(const BBox& b, Space expected) {
  if (b.space != expected) {
    throw Error(ErrorCode::SpaceMismatch, std::string("expected a ") + space_name(expected) +
                                              "-space box, got " + space_name(b.space));
  }
}

// Number of samples strictly below `edge`.
int samples_below(std::span<const int> samples, double edge) {
  return static_cast<int>(std::lower_bound(samples.begin(), samples.end(), edge,
                                           [](int s, double e) { return s < e; }) -
                          samples.begin());
}

}  // namespace

BBox clamp_to(const BBox& b, ImageDims dims) {
  const double x0 = std::clamp(b.x, 0.0, static_cast<double>(dims.width));
  const double y0 = std::clamp(b.y, 0.0, static_cast<double>(dims.height));
  const double x1 = std::clamp(b.right(), 0.0, static_cast<double>(dims.width));
  const double y1 = std::clamp(b.bottom(), 0.0, static_cast<double>(dims.height));
  return {x0, y0, std::max(0.0, x1 - x0), std::max(0.0, y1 - y0), b.space};
}

double iou(const BBox& a, const BBox& b) {
  if (a.space != b.space) {
    throw Error(ErrorCode::SpaceMismatch, std::string("iou of ") + space_name(a.space) + " and " +
                                              space_name(b.space) + " boxes");
  }
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0 || ih <= 0) return 0.0;
  // Areas from edge differences, like the overlap, so iou(a, a) == 1 exactly.
  const double inter = iw * ih;
  const double area_a = (a.right() - a.x) * (a.bottom() - a.y);
  const double area_b = (b.right() - b.x) * (b.bottom() - b.y);
  const double uni = area_a + area_b - inter;
  return uni > 0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

MappedBox map_bbox(const SampleGrid& grid, const BBox& source_box) {
  require_space(source_box, Space::Source);
  const BBox c = clamp_to(source_box, grid.spec().source);
  if (c.w <= 0 || c.h <= 0) {
    throw Error(ErrorCode::OutOfBounds, "box does not intersect the source image");
  }
  const int x0 = samples_below(grid.xs(), c.x);
  const int x1 = samples_below(grid.xs(), c.right());
  const int y0 = samples_below(grid.ys(), c.y);
  const int y1 = samples_below(grid.ys(), c.bottom());
  MappedBox out;
  out.box = {static_cast<double>(x0), static_cast<double>(y0), static_cast<double>(x1 - x0),
             static_cast<double>(y1 - y0), Space::Target};
  out.degenerate = x1 - x0 < 1 || y1 - y0 < 1;
  return out;
}

BBox transform_bbox(const SampleGrid& grid, const BBox& source_box) {
  const MappedBox m = map_bbox(grid, source_box);
  if (m.degenerate) {
    throw Error(ErrorCode::DegenerateBox, "box collapses to less than one target pixel");
  }
  return m.box;
}

BBox inverse_transform_bbox(const SampleGrid& grid, const BBox& target_box) {
  require_space(target_box, Space::Target);
  const auto& spec = grid.spec();
  const BBox c = clamp_to(target_box, spec.target);
  if (c.w <= 0 || c.h <= 0) {
    throw Error(ErrorCode::OutOfBounds, "box does not intersect the target image");
  }
  // Target pixel indices covered: ceil(lo) .. ceil(hi) - 1.
  auto expand = [](std::span<const int> samples, int limit, double lo, double hi) {
    const int j0 = static_cast<int>(std::ceil(lo));
    const int j1 = static_cast<int>(std::ceil(hi));
    if (j1 <= j0) {
      throw Error(ErrorCode::DegenerateBox, "target box covers no pixel center");
    }
    const int n = static_cast<int>(samples.size());
    const int from = j0 == 0 ? 0 : samples[j0 - 1] + 1;
    const int to = j1 >= n ? limit : samples[j1];
    return std::pair<int, int>{from, to};
  };
  const auto [x0, x1] = expand(grid.xs(), spec.source.width, c.x, c.right());
  const auto [y0, y1] = expand(grid.ys(), spec.source.height, c.y, c.bottom());
  return {static_cast<double>(x0), static_cast<double>(y0), static_cast<double>(x1 - x0),
          static_cast<double>(y1 - y0), Space::Source};
}

PixelRect exact_roundtrip_window(const SampleGrid& grid) {
  const PixelRect run = unit_density_window(grid);
  const auto& src = grid.spec().source;
  // A box edge survives when the pixel just outside it (left/top) or the
  // edge pixel itself (right/bottom) is a sample.
  PixelRect w;
  w.x0 = run.x0 == 0 ? 0 : run.x0 + 1;
  w.y0 = run.y0 == 0 ? 0 : run.y0 + 1;
  w.x1 = run.x1 == src.width ? src.width : run.x1 - 1;
  w.y1 = run.y1 == src.height ? src.height : run.y1 - 1;
  return w;
}

MappedBox scale_bbox(const BBox& b, ImageDims from, ImageDims to, Space to_space) {
  const BBox c = clamp_to(b, from);
  const double sx = static_cast<double>(to.width) / from.width;
  const double sy = static_cast<double>(to.height) / from.height;
  MappedBox out;
  out.box = {c.x * sx, c.y * sy, c.w * sx, c.h * sy, to_space};
  out.degenerate = out.box.w < 1.0 || out.box.h < 1.0;
  return out;
}

}  // namespace fovea
