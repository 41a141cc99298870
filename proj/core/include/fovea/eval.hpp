#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fovea/bbox.hpp"
#include "fovea/dataset.hpp"

namespace fovea {

/// Detector output for one spawned image, in that image's (target) space.
struct Detection {
  std::string entry;
  int class_id = 0;
  BBox bbox{0, 0, 0, 0, Space::Target};
  double confidence = 0.0;
};

/// JSON Lines: {"entry":..., "class_id":..., "bbox":[x,y,w,h], "confidence":c}.
/// Throws MalformedJson / MissingField; confidence must lie in [0, 1].
std::vector<Detection> read_detections(std::istream& in);
std::vector<Detection> read_detections(const std::filesystem::path& path);
void write_detections(std::span<const Detection> detections, std::ostream& out);

/// Assignment of one detection (index into the input span).
struct Match {
  std::size_t detection = 0;
  std::optional<std::size_t> ground_truth;
  double iou = 0.0;
};

/// Greedy one-to-one matching. Detections are visited by descending
/// confidence (ties: lexicographic bbox, then class); each takes the unmatched
/// same-class ground truth with the highest IoU, provided IoU >= threshold.
/// Results are in visiting order. Throws SpaceMismatch for mixed spaces.
std::vector<Match> match(std::span<const GroundTruthObject> ground_truth,
                         std::span<const Detection> detections, double iou_threshold);

enum class Region { Foveal, Peripheral, All };
std::string_view to_string(Region region) noexcept;

struct Counts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  Counts& operator+=(const Counts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const Counts&) const = default;
};

/// Exact non-negative ratio, reduced.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction of(std::int64_t num, std::int64_t den);
  double value() const noexcept { return den == 0 ? 0.0 : static_cast<double>(num) / den; }
  bool defined() const noexcept { return den != 0; }
  bool operator==(const Fraction&) const = default;
};

struct MetricsReport {
  Region region = Region::All;
  ImageDims size;
  double iou_threshold = 0.5;
  Counts totals;
  std::map<int, Counts> per_class;

  /// tp / (tp + fp) and tp / (tp + fn); den == 0 when undefined.
  Fraction precision_ratio() const { return Fraction::of(totals.tp, totals.tp + totals.fp); }
  Fraction recall_ratio() const { return Fraction::of(totals.tp, totals.tp + totals.fn); }
  /// 0 when undefined (see *_defined).
  double precision() const { return precision_ratio().value(); }
  double recall() const { return recall_ratio().value(); }
  bool precision_defined() const { return totals.tp + totals.fp > 0; }
  bool recall_defined() const { return totals.tp + totals.fn > 0; }
};

struct EvalOptions {
  double iou_threshold = 0.5;
  /// Detections with confidence below this are dropped before matching.
  double min_confidence = 0.0;
  /// Map detections back to source space and match against source boxes.
  bool source_space = false;
  BudgetPolicy policy = BudgetPolicy::Rebalance;
};

/// Ground truth restricted to `region` (degenerate objects never count);
/// every detection not matched within that set is a false positive.
/// Throws UnknownEntry for detections naming no manifest entry.
MetricsReport region_report(const DatasetManifest& manifest, std::span<const Detection> detections,
                            Region region, const EvalOptions& options = {});

MetricsReport foveal_report(const DatasetManifest& manifest, std::span<const Detection> detections,
                            const EvalOptions& options = {});
MetricsReport peripheral_report(const DatasetManifest& manifest,
                                std::span<const Detection> detections,
                                const EvalOptions& options = {});

struct SweepInput {
  ImageDims size;
  const DatasetManifest* manifest = nullptr;
  std::span<const Detection> detections;
};

/// Foveal, peripheral and all-object reports for every size, in input order.
std::vector<MetricsReport> sweep_report(std::span<const SweepInput> inputs,
                                        const EvalOptions& options = {});

/// Precision and recall of one row divided by the baseline row of the same
/// region (e.g. the 416x416 run), as exact fractions.
struct RelativeRow {
  ImageDims size;
  Region region = Region::All;
  Fraction recall;
  Fraction precision;
};

std::vector<RelativeRow> relative_to_baseline(std::span<const MetricsReport> rows,
                                              ImageDims baseline);

/// CSV with header size,region,tp,fp,fn,precision,recall.
void write_report_csv(std::span<const MetricsReport> rows, std::ostream& out);

}  // namespace fovea
