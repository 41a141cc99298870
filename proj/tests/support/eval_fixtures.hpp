#pragma once

#include <cstdint>
#include <vector>

#include "fovea/fovea.hpp"

namespace fovea::testing {

struct EvalCase {
  DatasetManifest manifest;
  std::vector<Detection> detections;
};

/// Ten 128x128 entries, each with a foveal object (class 1) and a peripheral
/// object (class 2). Detections: seven foveal hits plus four strays. Counted
/// by hand: foveal 7 TP / 4 FP / 3 FN, peripheral 1 / 10 / 9, all 8 / 3 / 12.
EvalCase hand_counted_case();

/// One ground-truth box and one detection overlapping it at IoU 0.49.
EvalCase iou_049_case();

/// Entries with up to five pairwise-disjoint ground-truth boxes and up to
/// five detections (jittered copies, wrong classes, random clutter).
EvalCase random_disjoint_case(std::uint64_t seed, int entries);

/// One manifest per default size. Foveal hits grow with size (5 at 96 up
/// to 10 at 416 out of 10 entries) while stray detections shrink.
struct SweepCase {
  std::vector<DatasetManifest> manifests;
  std::vector<std::vector<Detection>> detections;
  std::vector<int> hits;
  std::vector<int> strays;
};
SweepCase degrading_sweep_case();

}  // namespace fovea::testing
