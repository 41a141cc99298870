// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "eval_fixtures.hpp"
#include "fixtures.hpp"
#include "fovea/fovea.hpp"
#include "grid_checks.hpp"
#include "oracles.hpp"

namespace {

using namespace fovea;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome worked_example() {
  const auto t0 = Clock::now();
  RasterImage img({2080, 2080}, 3);
  for (int y = 0; y < 2080; ++y) {
    for (int x = 0; x < 2080; ++x) {
      const std::uint8_t v = ((x / 16 + y / 16) % 2) ? 255 : 0;
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = v;
    }
  }
  const auto build_start = Clock::now();
  const auto grid = build_grid({{2080, 2080}, {494, 494}, {1040, 1040}});
  const auto out = foveate_image(img, grid);
  const double elapsed = seconds_since(build_start);
  const bool size_ok = out.dims() == ImageDims{494, 494};
  const auto& ax = grid.x_spacing();
  const double analytic = std::exp(ax.budget_pos * ax.delta_pos);
  const bool border_ok = grid.xs().front() <= 1 && grid.xs().back() >= 2078 &&
                         grid.ys().front() <= 1 && grid.ys().back() >= 2078 &&
                         std::abs(analytic - 1040.0) < 1e-9;
  (void)t0;
  return {size_ok && border_ok && elapsed < 1.0,
          fmt("494x494=%s, outer samples %d/%d, exp((n/2)d)=%.9f, %.3f s", size_ok ? "yes" : "no",
              grid.xs().front(), grid.xs().back(), analytic, elapsed)};
}

Outcome grid_properties() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240611);
  int bad = 0;
  std::string first;
  for (int i = 0; i < 1000; ++i) {
    const FoveaSpec spec = testing::random_spec(rng);
    try {
      const auto v = testing::grid_violation(build_grid(spec));
      if (!v.empty()) {
        if (first.empty()) first = v;
        ++bad;
      }
    } catch (const Error& e) {
      if (first.empty()) first = e.what();
      ++bad;
    }
  }
  const double elapsed = seconds_since(t0);
  return {bad == 0 && elapsed < 10.0,
          fmt("1000 specs, %d violations, %.3f s%s%s", bad, elapsed, first.empty() ? "" : ": ",
              first.c_str())};
}

bool contains(const BBox& outer, const BBox& inner) {
  return outer.x <= inner.x && outer.y <= inner.y && outer.right() >= inner.right() &&
         outer.bottom() >= inner.bottom();
}

Outcome round_trip() {
  std::mt19937_64 rng(77);
  long points = 0;
  long point_failures = 0;
  long foveal_boxes = 0;
  long foveal_failures = 0;
  for (int g = 0; g < 100; ++g) {
    const FoveaSpec spec = testing::random_spec(rng);
    const auto grid = build_grid(spec);
    for (int i = 0; i < spec.target.width; ++i) {
      const int j = i % spec.target.height;
      ++points;
      if (forward_map(grid, inverse_map(grid, {i, j})) != PixelPoint{i, j}) ++point_failures;
    }
    const PixelRect w = exact_roundtrip_window(grid);
    if (w.width() < 1 || w.height() < 1) continue;
    std::uniform_int_distribution<int> xs(w.x0, w.x1 - 1);
    std::uniform_int_distribution<int> ys(w.y0, w.y1 - 1);
    for (int k = 0; k < 20; ++k) {
      int x0 = xs(rng), x1 = xs(rng), y0 = ys(rng), y1 = ys(rng);
      if (x0 > x1) std::swap(x0, x1);
      if (y0 > y1) std::swap(y0, y1);
      const BBox b{double(x0), double(y0), double(x1 - x0 + 1), double(y1 - y0 + 1), Space::Source};
      ++foveal_boxes;
      if (inverse_transform_bbox(grid, transform_bbox(grid, b)) != b) ++foveal_failures;
    }
  }
  long small_boxes = 0;
  long small_failures = 0;
  for (int cy = 0; cy < 8; ++cy) {
    for (int cx = 0; cx < 8; ++cx) {
      const auto grid = build_grid({{8, 8}, {4, 4}, {cx, cy}});
      for (int x0 = 0; x0 < 8; ++x0) {
        for (int x1 = x0 + 1; x1 <= 8; ++x1) {
          for (int y0 = 0; y0 < 8; ++y0) {
            for (int y1 = y0 + 1; y1 <= 8; ++y1) {
              const BBox b{double(x0), double(y0), double(x1 - x0), double(y1 - y0), Space::Source};
              const auto m = map_bbox(grid, b);
              if (m.degenerate) continue;
              ++small_boxes;
              if (!contains(inverse_transform_bbox(grid, m.box), b)) ++small_failures;
            }
          }
        }
      }
    }
  }
  return {point_failures == 0 && foveal_failures == 0 && small_failures == 0 && foveal_boxes > 0,
          fmt("sample points %ld/%ld, foveal boxes exact %ld/%ld, 8x8->4x4 containment %ld/%ld",
              points - point_failures, points, foveal_boxes - foveal_failures, foveal_boxes,
              small_boxes - small_failures, small_boxes)};
}

Outcome fit_parity() {
  const auto table = wilson_table();
  const FitResult fit = fit_eccentricity(table);
  const auto oracle = testing::grid_search_fit(table);
  const double rel = std::abs(fit.rmse - oracle.rmse) / oracle.rmse;
  bool monotone = true;
  double prev = fit(0.5);
  for (double e = 0.51; e <= 90.0; e += 0.01) {
    const double v = fit(e);
    monotone = monotone && v > prev;
    prev = v;
  }
  return {rel <= 0.01 && monotone && fit.scale > 0 && fit.offset > 0,
          fmt("rmse %.4f vs oracle %.4f (%.3f%%), scale %.3f offset %.5f, monotone=%s", fit.rmse,
              oracle.rmse, 100 * rel, fit.scale, fit.offset, monotone ? "yes" : "no")};
}

Outcome dataset_spawning() {
  const auto subset = load_coco(testing::coco_fixture_path(), default_categories());
  std::map<std::int64_t, RasterImage> images;
  int seed = 0;
  for (const auto& im : subset.images) images[im.id] = testing::pattern_image(im.dims, ++seed);
  const ImageLoader loader = [&](const CocoImage& im) { return images.at(im.id); };
  const auto f = spawn_foveated(subset, {128, 128}, loader);
  const auto u = spawn_uniform(subset, {128, 128}, loader);
  bool one_foveal = true;
  for (const auto* m : {&f, &u}) {
    for (const auto& e : m->entries) {
      int n = 0;
      for (const auto& o : e.objects) n += o.is_foveal;
      one_foveal = one_foveal && n == 1;
    }
  }
  return {subset.images.size() == 3 && subset.annotations.size() == 7 && f.entries.size() == 7 &&
              u.entries.size() == 7 && one_foveal,
          fmt("%zu images/%zu objects -> foveated %zu, uniform %zu, one foveal each=%s",
              subset.images.size(), subset.annotations.size(), f.entries.size(), u.entries.size(),
              one_foveal ? "yes" : "no")};
}

Outcome eval_parity() {
  const auto synthetic = testing::random_disjoint_case(2024, 50);
  int agree = 0;
  for (const auto& e : synthetic.manifest.entries) {
    std::vector<Detection> dets;
    for (const auto& d : synthetic.detections) {
      if (d.entry == e.file) dets.push_back(d);
    }
    int tp = 0;
    for (const auto& m : match(e.objects, dets, 0.5)) tp += m.ground_truth.has_value();
    agree += tp == testing::exhaustive_max_tp(e.objects, dets, 0.5);
  }
  const auto hand = testing::hand_counted_case();
  const auto rep = foveal_report(hand.manifest, hand.detections);
  const bool counts = rep.precision_ratio() == Fraction{7, 11} && rep.recall_ratio() == Fraction{7, 10};

  const auto flip = testing::iou_049_case();
  EvalOptions lower;
  lower.iou_threshold = 0.49;
  const auto at_half = foveal_report(flip.manifest, flip.detections).totals;
  const auto below = foveal_report(flip.manifest, flip.detections, lower).totals;
  const bool flipped = at_half == Counts{0, 1, 1} && below == Counts{1, 0, 0};
  return {agree == 50 && counts && flipped,
          fmt("greedy=exhaustive on %d/50 entries, precision %lld/%lld recall %lld/%lld, "
              "IoU 0.49 at threshold 0.5 -> tp %lld fp %lld fn %lld",
              agree, (long long)rep.precision_ratio().num, (long long)rep.precision_ratio().den,
              (long long)rep.recall_ratio().num, (long long)rep.recall_ratio().den,
              (long long)at_half.tp, (long long)at_half.fp, (long long)at_half.fn)};
}

Outcome ratio_table() {
  const auto s = testing::degrading_sweep_case();
  std::vector<SweepInput> inputs;
  for (std::size_t i = 0; i < s.manifests.size(); ++i) {
    inputs.push_back({s.manifests[i].target, &s.manifests[i], s.detections[i]});
  }
  const auto rows = sweep_report(inputs);
  const auto rel = relative_to_baseline(rows, {416, 416});
  bool exact = rows.size() == 33;
  for (std::size_t i = 0; exact && i < s.manifests.size(); ++i) {
    const auto& r = rel[3 * i];
    exact = r.region == Region::Foveal && r.recall == Fraction::of(s.hits[i], 10) &&
            r.precision == Fraction::of(s.hits[i], s.hits[i] + s.strays[i]);
  }
  const auto& low = rel.front();
  return {exact && rel[30].recall == Fraction{1, 1},
          fmt("11 sizes x 3 regions; 96x96 foveal recall %lld/%lld, precision %lld/%lld of 416",
              (long long)low.recall.num, (long long)low.recall.den, (long long)low.precision.num,
              (long long)low.precision.den)};
}

Outcome bench_ordering() {
  BenchConfig cfg;
  cfg.source = {640, 480};
  cfg.sizes = default_sizes();
  cfg.repetitions = 300;
  cfg.warmup = 20;
  std::string detail;
  // Timing is noisy on shared machines; allow three attempts.
  for (int attempt = 1; attempt <= 3; ++attempt) {
    const auto r = run_bench(cfg);
    bool monotone = true;
    for (std::size_t i = 1; i < r.size(); ++i) monotone = monotone && r[i].mean_us >= 0.9 * r[i - 1].mean_us;
    const double t128 = r[1].mean_us;
    const double t416 = r.back().mean_us;
    detail = fmt("attempt %d: mean us 96=%.1f 128=%.1f 256=%.1f 416=%.1f, monotone(10%%)=%s", attempt,
                 r[0].mean_us, t128, r[5].mean_us, t416, monotone ? "yes" : "no");
    if (monotone && t128 < t416) return {true, detail};
  }
  return {false, detail};
}

Outcome dataset_determinism() {
  testing::TempDir dir("accept");
  testing::write_fixture_images(dir.path() / "images");
  std::vector<std::map<std::string, std::string>> runs;
  for (const char* name : {"a", "b"}) {
    const auto out = dir.path() / name;
    const auto r = testing::run_cli({"dataset", "--input", testing::coco_fixture_path().string(),
                                     "--images", (dir.path() / "images").string(), "--output",
                                     out.string(), "--sizes", "96,224,416", "--workers", "2"});
    if (r.code != 0) return {false, "dataset command failed: " + r.err};
    std::map<std::string, std::string> files;
    for (const auto& p : fs::recursive_directory_iterator(out)) {
      if (p.is_regular_file()) files[fs::relative(p.path(), out).string()] = testing::read_file(p.path());
    }
    runs.push_back(std::move(files));
  }
  return {runs[0] == runs[1] && runs[0].size() == 3 * 8,
          fmt("%zu files per run, identical=%s", runs[0].size(), runs[0] == runs[1] ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"worked-example-2080-to-494", worked_example},
      {"grid-property-suite", grid_properties},
      {"round-trip", round_trip},
      {"eccentricity-fit-parity", fit_parity},
      {"dataset-spawning", dataset_spawning},
      {"eval-oracle-parity", eval_parity},
      {"relative-ratio-table", ratio_table},
      {"bench-ordering", bench_ordering},
      {"dataset-determinism", dataset_determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  %-28s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
