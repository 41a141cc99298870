#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "eval_fixtures.hpp"
#include "fovea/error.hpp"
#include "fovea/eval.hpp"
#include "oracles.hpp"

namespace fovea {
namespace {

BBox tb(double x, double y, double w, double h) { return {x, y, w, h, Space::Target}; }

GroundTruthObject gt(int cls, BBox b) { return {1, cls, b, {}, true, false}; }

int tp_of(const std::vector<Match>& ms) {
  return static_cast<int>(std::count_if(ms.begin(), ms.end(), [](const Match& m) { return m.ground_truth.has_value(); }));
}

TEST(Match, CorrectClassAboveThresholdIsTruePositive) {
  // 10x10 boxes offset by 2: IoU 80/120.
  const std::vector<GroundTruthObject> g{gt(1, tb(0, 0, 10, 10))};
  const std::vector<Detection> d{{"e", 1, tb(2, 0, 10, 10), 0.9}};
  const auto ms = match(g, d, 0.5);
  ASSERT_EQ(ms.size(), 1u);
  ASSERT_TRUE(ms[0].ground_truth);
  EXPECT_NEAR(ms[0].iou, 80.0 / 120.0, 1e-12);
}

TEST(Match, WrongClassNeverMatches) {
  const std::vector<GroundTruthObject> g{gt(1, tb(0, 0, 10, 10))};
  const std::vector<Detection> d{{"e", 2, tb(2, 0, 10, 10), 0.9}};
  EXPECT_EQ(tp_of(match(g, d, 0.5)), 0);
}

TEST(Match, HigherConfidenceWinsContestedObject) {
  const std::vector<GroundTruthObject> g{gt(1, tb(0, 0, 10, 10))};
  const std::vector<Detection> d{{"e", 1, tb(0, 0, 10, 10), 0.3}, {"e", 1, tb(1, 0, 10, 10), 0.8}};
  const auto ms = match(g, d, 0.5);
  ASSERT_EQ(ms.size(), 2u);
  EXPECT_EQ(ms[0].detection, 1u);
  EXPECT_TRUE(ms[0].ground_truth);
  EXPECT_FALSE(ms[1].ground_truth);
}

TEST(Match, PrefersHighestIouAmongFreeObjects) {
  const std::vector<GroundTruthObject> g{gt(1, tb(0, 0, 10, 10)), gt(1, tb(3, 0, 10, 10))};
  const std::vector<Detection> d{{"e", 1, tb(3, 0, 10, 10), 0.9}};
  const auto ms = match(g, d, 0.5);
  ASSERT_TRUE(ms[0].ground_truth);
  EXPECT_EQ(*ms[0].ground_truth, 1u);
}

TEST(Match, ThreeObjectsFourDetectionsAgreesWithExhaustive) {
  const std::vector<GroundTruthObject> g{gt(1, tb(0, 0, 20, 20)), gt(1, tb(40, 0, 20, 20)),
                                         gt(2, tb(0, 40, 20, 20))};
  const std::vector<Detection> d{{"e", 1, tb(1, 1, 20, 20), 0.9},
                                 {"e", 1, tb(2, 0, 19, 20), 0.8},
                                 {"e", 1, tb(42, 2, 18, 18), 0.7},
                                 {"e", 2, tb(0, 44, 20, 20), 0.6}};
  const auto ms = match(g, d, 0.5);
  EXPECT_EQ(tp_of(ms), testing::exhaustive_max_tp(g, d, 0.5));
  EXPECT_EQ(tp_of(ms), 3);
}

TEST(Match, OrderInvariant) {
  const auto c = testing::random_disjoint_case(5, 30);
  std::mt19937 rng(1);
  for (const auto& e : c.manifest.entries) {
    std::vector<Detection> dets;
    for (const auto& d : c.detections) {
      if (d.entry == e.file) dets.push_back(d);
    }
    auto key = [&](const std::vector<Match>& ms, const std::vector<Detection>& ds) {
      std::vector<std::pair<double, long>> out;
      for (const auto& m : ms) out.emplace_back(ds[m.detection].bbox.x, m.ground_truth ? long(*m.ground_truth) : -1L);
      std::sort(out.begin(), out.end());
      return out;
    };
    const auto base = key(match(e.objects, dets, 0.5), dets);
    for (int r = 0; r < 5; ++r) {
      std::shuffle(dets.begin(), dets.end(), rng);
      ASSERT_EQ(key(match(e.objects, dets, 0.5), dets), base);
    }
  }
}

TEST(Match, GreedyEqualsExhaustiveOnDisjointObjects) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto c = testing::random_disjoint_case(seed, 50);
    for (const auto& e : c.manifest.entries) {
      std::vector<Detection> dets;
      for (const auto& d : c.detections) {
        if (d.entry == e.file) dets.push_back(d);
      }
      ASSERT_EQ(tp_of(match(e.objects, dets, 0.5)), testing::exhaustive_max_tp(e.objects, dets, 0.5));
    }
  }
}

TEST(Match, SpaceMismatch) {
  const std::vector<GroundTruthObject> g{gt(1, {0, 0, 10, 10, Space::Source})};
  const std::vector<Detection> d{{"e", 1, tb(0, 0, 10, 10), 0.9}};
  EXPECT_THROW(match(g, d, 0.5), Error);
}

TEST(Reports, HandCountedFixture) {
  const auto c = testing::hand_counted_case();
  const auto f = foveal_report(c.manifest, c.detections);
  EXPECT_EQ(f.totals, (Counts{7, 4, 3}));
  EXPECT_EQ(f.precision_ratio(), (Fraction{7, 11}));
  EXPECT_EQ(f.recall_ratio(), (Fraction{7, 10}));
  EXPECT_DOUBLE_EQ(f.precision(), 7.0 / 11.0);

  const auto p = peripheral_report(c.manifest, c.detections);
  EXPECT_EQ(p.totals, (Counts{1, 10, 9}));
  const auto a = region_report(c.manifest, c.detections, Region::All);
  EXPECT_EQ(a.totals, (Counts{8, 3, 12}));
  EXPECT_EQ(a.recall_ratio(), (Fraction{2, 5}));
  EXPECT_EQ(f.per_class.at(1), (Counts{7, 3, 3}));
  EXPECT_EQ(f.per_class.at(2), (Counts{0, 1, 0}));
}

TEST(Reports, RecallDenominatorIsRegionSize) {
  const auto c = testing::hand_counted_case();
  for (Region r : {Region::Foveal, Region::Peripheral, Region::All}) {
    const auto rep = region_report(c.manifest, c.detections, r);
    const std::int64_t expected = r == Region::All ? 20 : 10;
    EXPECT_EQ(rep.totals.tp + rep.totals.fn, expected);
    EXPECT_GE(rep.precision(), 0.0);
    EXPECT_LE(rep.precision(), 1.0);
  }
}

TEST(Reports, PerfectAndEmptyDetections) {
  auto c = testing::hand_counted_case();
  std::vector<Detection> perfect;
  for (const auto& e : c.manifest.entries) perfect.push_back({e.file, 1, tb(40, 40, 30, 30), 1.0});
  const auto good = foveal_report(c.manifest, perfect);
  EXPECT_EQ(good.recall(), 1.0);
  EXPECT_EQ(good.precision(), 1.0);

  const auto none = foveal_report(c.manifest, {});
  EXPECT_EQ(none.recall(), 0.0);
  EXPECT_EQ(none.precision(), 0.0);
  EXPECT_FALSE(none.precision_defined());
  EXPECT_TRUE(none.recall_defined());
  EXPECT_FALSE(none.precision_ratio().defined());
}

TEST(Reports, IouThresholdFlip) {
  const auto c = testing::iou_049_case();
  EvalOptions at_half;
  EvalOptions lower;
  lower.iou_threshold = 0.49;
  EXPECT_EQ(foveal_report(c.manifest, c.detections, at_half).totals, (Counts{0, 1, 1}));
  EXPECT_EQ(foveal_report(c.manifest, c.detections, lower).totals, (Counts{1, 0, 0}));
}

TEST(Reports, ConfidenceFloor) {
  const auto c = testing::hand_counted_case();
  EvalOptions opts;
  opts.min_confidence = 0.65;
  // Drops the IoU-1/3 stray (0.6) and the duplicate (0.5).
  EXPECT_EQ(foveal_report(c.manifest, c.detections, opts).totals, (Counts{7, 2, 3}));
}

TEST(Reports, DegenerateObjectsExcluded) {
  auto c = testing::hand_counted_case();
  for (auto& e : c.manifest.entries) e.objects[1].degenerate = true;
  EXPECT_EQ(peripheral_report(c.manifest, c.detections).totals.fn, 0);
}

TEST(Reports, UnknownEntry) {
  const auto c = testing::hand_counted_case();
  const std::vector<Detection> d{{"nope.png", 1, tb(0, 0, 5, 5), 0.5}};
  try {
    foveal_report(c.manifest, d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownEntry);
  }
}

TEST(Reports, SourceSpaceForFoveatedManifest) {
  CocoSubset subset = parse_coco(R"({"images": [{"id": 1, "file_name": "a.png", "width": 640, "height": 480}],
      "annotations": [{"id": 1, "image_id": 1, "category_id": 1, "bbox": [300, 200, 40, 60]},
                      {"id": 2, "image_id": 1, "category_id": 2, "bbox": [20, 30, 100, 90]}]})",
                                 default_categories());
  const auto m = spawn_foveated(subset, {128, 128}, [](const CocoImage& im) { return RasterImage(im.dims, 1); });
  std::vector<Detection> dets;
  for (const auto& e : m.entries) {
    for (const auto& o : e.objects) dets.push_back({e.file, o.class_id, o.bbox, 0.9});
  }
  EvalOptions src;
  src.source_space = true;
  const auto target_rep = region_report(m, dets, Region::All);
  const auto source_rep = region_report(m, dets, Region::All, src);
  EXPECT_EQ(target_rep.totals, (Counts{4, 0, 0}));
  // Foveal objects survive the inverse mapping; detections of the other
  // object count against the foveal report.
  EXPECT_EQ(foveal_report(m, dets, src).totals, (Counts{2, 2, 0}));
  EXPECT_EQ(source_rep.totals.tp + source_rep.totals.fn, 4);
}

TEST(Sweep, RowsPerSizeAndRelativeTable) {
  const auto s = testing::degrading_sweep_case();
  std::vector<SweepInput> inputs;
  for (std::size_t i = 0; i < s.manifests.size(); ++i) {
    inputs.push_back({s.manifests[i].target, &s.manifests[i], s.detections[i]});
  }
  const auto rows = sweep_report(inputs);
  ASSERT_EQ(rows.size(), 33u);
  EXPECT_EQ(rows[0].region, Region::Foveal);
  EXPECT_EQ(rows[1].region, Region::Peripheral);
  EXPECT_EQ(rows[2].region, Region::All);

  const auto rel = relative_to_baseline(rows, {416, 416});
  ASSERT_EQ(rel.size(), rows.size());
  for (std::size_t i = 0; i < s.manifests.size(); ++i) {
    const auto& r = rel[3 * i];
    EXPECT_EQ(r.region, Region::Foveal);
    EXPECT_EQ(r.recall, Fraction::of(s.hits[i], 10));
    EXPECT_EQ(r.precision, Fraction::of(s.hits[i], s.hits[i] + s.strays[i]));
  }
  EXPECT_EQ(rel[30].recall, (Fraction{1, 1}));
  EXPECT_EQ(rel[0].recall, (Fraction{1, 2}));
  // Peripheral rows have no true positives anywhere, so no defined ratio.
  EXPECT_FALSE(rel[1].recall.defined());
  EXPECT_THROW(relative_to_baseline(rows, {512, 512}), Error);
}

TEST(Sweep, CsvFormat) {
  const auto c = testing::hand_counted_case();
  const SweepInput in{{128, 128}, &c.manifest, c.detections};
  const auto rows = sweep_report(std::span<const SweepInput>(&in, 1));
  std::ostringstream out;
  write_report_csv(rows, out);
  EXPECT_EQ(out.str(),
            "size,region,tp,fp,fn,precision,recall\n"
            "128x128,foveal,7,4,3,0.636364,0.700000\n"
            "128x128,peripheral,1,10,9,0.090909,0.100000\n"
            "128x128,all,8,3,12,0.727273,0.400000\n");
}

TEST(Detections, JsonLinesRoundTrip) {
  const auto c = testing::hand_counted_case();
  std::stringstream buf;
  write_detections(c.detections, buf);
  const auto back = read_detections(buf);
  ASSERT_EQ(back.size(), c.detections.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].entry, c.detections[i].entry);
    EXPECT_EQ(back[i].bbox, c.detections[i].bbox);
    EXPECT_EQ(back[i].confidence, c.detections[i].confidence);
  }
}

TEST(Detections, RejectsBadLines) {
  const auto code = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_detections(in);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidSpec;
  };
  EXPECT_EQ(code("{\"entry\": \"a\", \"class_id\": 1, \"bbox\": [0,0,1,1], \"confidence\": 1.5}\n"),
            ErrorCode::MalformedJson);
  EXPECT_EQ(code("{\"entry\": \"a\", \"class_id\": 1, \"bbox\": [0,0,1,1]}\n"), ErrorCode::MissingField);
  EXPECT_EQ(code("{\"entry\": \"a\", \"class_id\": 1, \"bbox\": [0,0,1], \"confidence\": 0.5}\n"),
            ErrorCode::MalformedJson);
  EXPECT_EQ(code("not json\n"), ErrorCode::MalformedJson);
}

TEST(Fraction, ReducesAndFlagsZeroDenominator) {
  EXPECT_EQ(Fraction::of(6, 8), (Fraction{3, 4}));
  EXPECT_EQ(Fraction::of(0, 5), (Fraction{0, 1}));
  EXPECT_FALSE(Fraction::of(0, 0).defined());
  EXPECT_EQ(Fraction::of(0, 0).value(), 0.0);
}

}  // namespace
}  // namespace fovea
