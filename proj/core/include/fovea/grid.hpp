#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace fovea {

struct ImageDims {
  int width = 0;
  int height = 0;

  std::int64_t area() const noexcept { return std::int64_t{width} * height; }
  auto operator<=>(const ImageDims&) const = default;
};

/// Integer pixel coordinate; x is the column, origin top-left.
struct PixelPoint {
  int x = 0;
  int y = 0;

  auto operator<=>(const PixelPoint&) const = default;
};

/// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const noexcept { return x1 - x0; }
  int height() const noexcept { return y1 - y0; }
  auto operator<=>(const PixelRect&) const = default;
};

/// Full parameterization of a foveated resampling: source and target sizes
/// plus the fovea center in source pixel coordinates.
struct FoveaSpec {
  ImageDims source;
  ImageDims target;
  PixelPoint center;

  auto operator<=>(const FoveaSpec&) const = default;
};

/// How the n output samples of an axis are split between the two halves.
enum class BudgetPolicy {
  /// n/2 per half; a half with fewer than n/2 pixels hands its surplus to
  /// the other half. Every spec with target <= source is feasible.
  Rebalance,
  /// Exactly n/2 per half; fails with InfeasibleGrid when a half is short.
  Strict,
};

/// Log-step and sample budget of each half of one axis.
///
/// The fovea center c splits an axis of length N at the edge between pixels
/// c-1 and c: the negative half owns [0, c) and the positive half [c, N).
/// Sample k (1-based) of a half lies near offset exp(k * delta) from that
/// edge, with delta = ln(extent) / budget so that the last sample reaches the
/// border. With a balanced budget of n/2 this is delta = (2/n) ln(extent).
struct AxisSpacing {
  double delta_neg = 0.0;
  double delta_pos = 0.0;
  int extent_neg = 0;
  int extent_pos = 0;
  int budget_neg = 0;
  int budget_pos = 0;
};

/// Per-axis source indices selected by the log-spaced model. Immutable.
class SampleGrid {
 public:
  const FoveaSpec& spec() const noexcept { return spec_; }
  std::span<const int> xs() const noexcept { return xs_; }
  std::span<const int> ys() const noexcept { return ys_; }
  const AxisSpacing& x_spacing() const noexcept { return x_spacing_; }
  const AxisSpacing& y_spacing() const noexcept { return y_spacing_; }

  /// Target index of the innermost positive-half sample on each axis (the
  /// sample at the fovea center pixel when the innermost offset is 1).
  PixelPoint fovea_index() const noexcept {
    return {x_spacing_.budget_neg, y_spacing_.budget_neg};
  }

 private:
  friend SampleGrid build_grid(const FoveaSpec& spec, BudgetPolicy policy);

  FoveaSpec spec_;
  std::vector<int> xs_;
  std::vector<int> ys_;
  AxisSpacing x_spacing_;
  AxisSpacing y_spacing_;
};

/// Throws InvalidSpec unless source >= 2x2, target <= source with even,
/// positive dims, and the center lies inside the source.
void validate(const FoveaSpec& spec);

/// Splits `target` samples of an axis of `length` pixels around `center`.
AxisSpacing axis_spacing(int length, int target, int center, BudgetPolicy policy);

/// Offsets 1..extent (from the half's center edge) of `budget` samples on one
/// half-axis: strictly increasing, last offset == extent, innermost == 1 when
/// budget > 1, gaps nondecreasing outward.
std::vector<int> half_axis_offsets(int extent, int budget);

SampleGrid build_grid(const FoveaSpec& spec, BudgetPolicy policy = BudgetPolicy::Rebalance);

/// Nearest sample per axis, ties resolved toward the fovea.
PixelPoint forward_map(const SampleGrid& grid, PixelPoint source);

/// Source pixel sampled by target pixel `target`.
PixelPoint inverse_map(const SampleGrid& grid, PixelPoint target);

/// Largest source rectangle around the fovea that is sampled at unit density
/// (consecutive source indices map to consecutive target indices).
PixelRect unit_density_window(const SampleGrid& grid);

namespace detail {

/// Nearest entry of `samples` to `p`; ties go to the entry closer to the
/// center edge at `center - 0.5`.
int nearest_sample(std::span<const int> samples, int p, int center);

}  // namespace detail

}  // namespace fovea
