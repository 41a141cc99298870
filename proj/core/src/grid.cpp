#include "fovea/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

#include "fovea/error.hpp"

namespace fovea {

namespace {

std::string dims_str(ImageDims d) {
  return std::to_string(d.width) + "x" + std::to_string(d.height);
}

// Nondecreasing least-squares fit of `values` (pool adjacent violators).
// Preserves the sum.
std::vector<double> isotonic_nondecreasing(const std::vector<double>& values) {
  struct Block {
    double sum;
    int count;
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (double v : values) {
    blocks.push_back({v, 1});
    while (blocks.size() > 1) {
      const Block& prev = blocks[blocks.size() - 2];
      const Block& last = blocks.back();
      if (prev.sum * last.count <= last.sum * prev.count) break;
      Block merged{prev.sum + last.sum, prev.count + last.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const Block& b : blocks) out.insert(out.end(), b.count, b.sum / b.count);
  return out;
}

std::int64_t gap_sum(const std::vector<double>& gaps, double shift) {
  std::int64_t total = 0;
  for (double g : gaps) total += std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(g + shift)));
  return total;
}

}  // namespace

void validate(const FoveaSpec& spec) {
  const auto& s = spec.source;
  const auto& t = spec.target;
  if (s.width < 2 || s.height < 2) {
    throw Error(ErrorCode::InvalidSpec, "source must be at least 2x2, got " + dims_str(s));
  }
  if (t.width <= 0 || t.height <= 0 || t.width % 2 != 0 || t.height % 2 != 0) {
    throw Error(ErrorCode::InvalidSpec, "target dims must be positive and even, got " + dims_str(t));
  }
  if (t.width > s.width || t.height > s.height) {
    throw Error(ErrorCode::InvalidSpec,
                "target " + dims_str(t) + " exceeds source " + dims_str(s));
  }
  if (spec.center.x < 0 || spec.center.x >= s.width || spec.center.y < 0 ||
      spec.center.y >= s.height) {
    throw Error(ErrorCode::InvalidSpec, "fovea center (" + std::to_string(spec.center.x) + "," +
                                            std::to_string(spec.center.y) + ") outside source " +
                                            dims_str(s));
  }
}

AxisSpacing axis_spacing(int length, int target, int center, BudgetPolicy policy) {
  AxisSpacing a;
  a.extent_neg = center;
  a.extent_pos = length - center;
  const int half = target / 2;
  a.budget_neg = half;
  a.budget_pos = target - half;
  if (policy == BudgetPolicy::Rebalance) {
    if (a.extent_neg < a.budget_neg) {
      a.budget_neg = a.extent_neg;
      a.budget_pos = target - a.budget_neg;
    } else if (a.extent_pos < a.budget_pos) {
      a.budget_pos = a.extent_pos;
      a.budget_neg = target - a.budget_pos;
    }
  }
  auto delta = [](int extent, int budget) {
    return budget > 0 ? std::log(static_cast<double>(std::max(extent, 1))) / budget : 0.0;
  };
  a.delta_neg = delta(a.extent_neg, a.budget_neg);
  a.delta_pos = delta(a.extent_pos, a.budget_pos);
  return a;
}

std::vector<int> half_axis_offsets(int extent, int budget) {
  if (budget < 0 || extent < 0) {
    throw Error(ErrorCode::InvalidSpec, "negative extent or budget");
  }
  if (budget > extent) {
    throw Error(ErrorCode::InfeasibleGrid, std::to_string(budget) + " samples cannot fit in " +
                                               std::to_string(extent) + " pixels");
  }
  std::vector<int> offsets;
  offsets.reserve(budget);
  if (budget == 0) return offsets;
  if (budget == extent) {
    for (int k = 1; k <= extent; ++k) offsets.push_back(k);
    return offsets;
  }
  if (budget == 1) {
    offsets.push_back(extent);
    return offsets;
  }

  // Continuous monotone-clamped target: unit spacing until the log curve
  // overtakes it. Innermost sample pinned at offset 1, outermost at extent.
  const double delta = std::log(static_cast<double>(extent)) / budget;
  std::vector<double> gaps(budget);
  double prev = 0.0;
  for (int k = 1; k <= budget; ++k) {
    double pos = std::max(static_cast<double>(k), std::exp(k * delta));
    if (k == 1) pos = 1.0;
    if (k == budget) pos = extent;
    gaps[k - 1] = pos - prev;
    prev = pos;
  }
  gaps = isotonic_nondecreasing(gaps);
  for (double& g : gaps) {
    const double r = std::round(g);
    if (std::abs(g - r) < 1e-9) g = r;
  }

  // Integer gaps floor(g + shift), clamped to >= 1, are nondecreasing for any
  // common shift. Take the largest shift whose total stays within extent.
  // gap_sum(-1) <= extent < gap_sum(1) because every g >= 1.
  double lo = -1.0;
  double hi = 1.0;
  for (int it = 0; it < 64 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (gap_sum(gaps, mid) <= extent) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  std::vector<int> steps(budget);
  std::int64_t total = 0;
  for (int k = 0; k < budget; ++k) {
    steps[k] = std::max(1, static_cast<int>(std::floor(gaps[k] + lo)));
    total += steps[k];
  }
  // Remainder goes to the outermost gaps, which keeps them nondecreasing.
  for (std::int64_t r = extent - total, k = budget - 1; r > 0 && k >= 0; --r, --k) {
    ++steps[static_cast<std::size_t>(k)];
  }

  int acc = 0;
  for (int s : steps) {
    acc += s;
    offsets.push_back(acc);
  }
  return offsets;
}

namespace {

std::vector<int> build_axis(int length, int target, int center, BudgetPolicy policy,
                            AxisSpacing& spacing) {
  spacing = axis_spacing(length, target, center, policy);
  const auto neg = half_axis_offsets(spacing.extent_neg, spacing.budget_neg);
  const auto pos = half_axis_offsets(spacing.extent_pos, spacing.budget_pos);
  std::vector<int> out;
  out.reserve(target);
  for (auto it = neg.rbegin(); it != neg.rend(); ++it) out.push_back(center - *it);
  for (int off : pos) out.push_back(center + off - 1);
  return out;
}

void check_in(int v, int limit, const char* what) {
  if (v < 0 || v >= limit) {
    throw Error(ErrorCode::OutOfBounds, std::string(what) + " coordinate " + std::to_string(v) +
                                            " outside [0," + std::to_string(limit) + ")");
  }
}

}  // namespace

SampleGrid build_grid(const FoveaSpec& spec, BudgetPolicy policy) {
  validate(spec);
  SampleGrid grid;
  grid.spec_ = spec;
  grid.xs_ = build_axis(spec.source.width, spec.target.width, spec.center.x, policy,
                        grid.x_spacing_);
  grid.ys_ = build_axis(spec.source.height, spec.target.height, spec.center.y, policy,
                        grid.y_spacing_);
  return grid;
}

namespace detail {

int nearest_sample(std::span<const int> samples, int p, int center) {
  const auto it = std::lower_bound(samples.begin(), samples.end(), p);
  const int hi = static_cast<int>(it - samples.begin());
  if (hi < static_cast<int>(samples.size()) && samples[hi] == p) return hi;
  if (hi == 0) return 0;
  if (hi == static_cast<int>(samples.size())) return hi - 1;
  const int lo = hi - 1;
  const int d_lo = p - samples[lo];
  const int d_hi = samples[hi] - p;
  if (d_lo != d_hi) return d_lo < d_hi ? lo : hi;
  // Distances to the center edge at center - 0.5, doubled to stay integral.
  const int f_lo = std::abs(2 * samples[lo] - 2 * center + 1);
  const int f_hi = std::abs(2 * samples[hi] - 2 * center + 1);
  return f_lo <= f_hi ? lo : hi;
}

}  // namespace detail

PixelPoint forward_map(const SampleGrid& grid, PixelPoint source) {
  const auto& spec = grid.spec();
  check_in(source.x, spec.source.width, "source x");
  check_in(source.y, spec.source.height, "source y");
  return {detail::nearest_sample(grid.xs(), source.x, spec.center.x),
          detail::nearest_sample(grid.ys(), source.y, spec.center.y)};
}

PixelPoint inverse_map(const SampleGrid& grid, PixelPoint target) {
  const auto& spec = grid.spec();
  check_in(target.x, spec.target.width, "target x");
  check_in(target.y, spec.target.height, "target y");
  return {grid.xs()[target.x], grid.ys()[target.y]};
}

namespace {

// Maximal run of consecutive samples containing index `seed`, as a
// half-open source interval.
std::pair<int, int> unit_run(std::span<const int> samples, int seed) {
  int lo = seed;
  int hi = seed;
  while (lo > 0 && samples[lo - 1] == samples[lo] - 1) --lo;
  while (hi + 1 < static_cast<int>(samples.size()) && samples[hi + 1] == samples[hi] + 1) ++hi;
  return {samples[lo], samples[hi] + 1};
}

}  // namespace

PixelRect unit_density_window(const SampleGrid& grid) {
  const PixelPoint f = grid.fovea_index();
  const int fx = std::min(f.x, static_cast<int>(grid.xs().size()) - 1);
  const int fy = std::min(f.y, static_cast<int>(grid.ys().size()) - 1);
  const auto [x0, x1] = unit_run(grid.xs(), fx);
  const auto [y0, y1] = unit_run(grid.ys(), fy);
  return {x0, y0, x1, y1};
}

}  // namespace fovea
