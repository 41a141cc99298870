#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fovea/fovea.hpp"

namespace fovea::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidSpec:
    case ErrorCode::OutOfBounds:
    case ErrorCode::DegenerateFit:
      return kBadArgs;
    case ErrorCode::InfeasibleGrid:
      return kInfeasibleGrid;
    default:
      return kIoError;
  }
}

namespace {

// Raised for bad flag values found after CLI11 has parsed.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int parse_int(std::string_view s, const char* what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw UsageError(std::string("invalid ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

// "WxH", or "N" for NxN.
ImageDims parse_dims(std::string_view s) {
  const auto parts = split(s, 'x');
  if (parts.size() == 1) {
    const int n = parse_int(parts[0], "size");
    return {n, n};
  }
  if (parts.size() != 2) throw UsageError("invalid size '" + std::string(s) + "', expected WxH");
  return {parse_int(parts[0], "width"), parse_int(parts[1], "height")};
}

std::vector<ImageDims> parse_size_list(std::string_view s) {
  std::vector<ImageDims> sizes;
  for (auto part : split(s, ',')) sizes.push_back(parse_dims(part));
  return sizes;
}

PixelPoint parse_point(std::string_view s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw UsageError("invalid center '" + std::string(s) + "', expected X,Y");
  return {parse_int(parts[0], "center x"), parse_int(parts[1], "center y")};
}

std::vector<int> parse_int_list(std::string_view s, const char* what) {
  std::vector<int> out;
  for (auto part : split(s, ',')) out.push_back(parse_int(part, what));
  return out;
}

json grid_json(const SampleGrid& grid) {
  const auto& spec = grid.spec();
  auto spacing = [](const AxisSpacing& a) {
    return json{{"delta_neg", a.delta_neg},   {"delta_pos", a.delta_pos},
                {"extent_neg", a.extent_neg}, {"extent_pos", a.extent_pos},
                {"budget_neg", a.budget_neg}, {"budget_pos", a.budget_pos}};
  };
  return json{{"source", {spec.source.width, spec.source.height}},
              {"target", {spec.target.width, spec.target.height}},
              {"center", {spec.center.x, spec.center.y}},
              {"x_spacing", spacing(grid.x_spacing())},
              {"y_spacing", spacing(grid.y_spacing())},
              {"xs", std::vector<int>(grid.xs().begin(), grid.xs().end())},
              {"ys", std::vector<int>(grid.ys().begin(), grid.ys().end())}};
}

void require_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) throw UsageError(std::string(what) + " '" + path + "' is not a file");
}

void require_png_path(const std::string& path) {
  auto ext = fs::path(path).extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext != ".png") throw UsageError("output '" + path + "' must end in .png");
}

// Every category id referenced by the file's annotations.
std::vector<int> all_category_ids(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  const json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.contains("annotations") || !doc["annotations"].is_array()) {
    throw Error(ErrorCode::MalformedJson, path + " is not a COCO annotation file");
  }
  std::vector<int> ids;
  for (const auto& a : doc["annotations"]) {
    if (a.contains("category_id") && a["category_id"].is_number_integer()) {
      ids.push_back(a["category_id"].get<int>());
    }
  }
  return ids;
}

std::string size_dir(ImageDims d) { return std::to_string(d.width) + "x" + std::to_string(d.height); }

struct Options {
  bool json_diagnostics = false;

  struct {
    std::string input, output, center, size, coco;
    std::int64_t ann = -1;
    bool print_grid = false;
    bool strict = false;
  } foveate;

  struct {
    std::string source, size, center;
    bool strict = false;
  } grid;

  struct {
    std::string input, images, output, sizes, mode = "foveated", categories;
    int workers = 1;
    bool strict = false;
  } dataset;

  struct {
    std::vector<std::string> inputs, detections;
    std::string output, baseline;
    double iou = 0.5;
    double min_confidence = 0.0;
    bool source_space = false;
  } eval;

  struct {
    std::string sizes, source = "640x480", output, op = "foveate";
    int reps = 100;
    int warmup = 10;
    std::uint64_t seed = 1;
    int workers = 1;
    bool rebuild_grid = false;
  } bench;

  struct {
    std::string input;
  } fit;
};

int cmd_foveate(const Options& o, std::ostream& out) {
  const auto& f = o.foveate;
  require_file(f.input, "input");
  require_png_path(f.output);
  const ImageDims target = parse_dims(f.size);
  if (!f.center.empty() && !f.coco.empty()) throw UsageError("--center and --coco are mutually exclusive");
  if (!f.coco.empty() && f.ann < 0) throw UsageError("--coco requires --ann");
  if (f.coco.empty() && f.ann >= 0) throw UsageError("--ann requires --coco");
  std::optional<PixelPoint> center;
  if (!f.center.empty()) center = parse_point(f.center);

  const RasterImage img = load_image(f.input);
  if (!f.coco.empty()) {
    const CocoSubset subset = load_coco(f.coco, all_category_ids(f.coco));
    const auto it = std::find_if(subset.annotations.begin(), subset.annotations.end(),
                                 [&](const CocoAnnotation& a) { return a.id == f.ann; });
    if (it == subset.annotations.end()) {
      throw UsageError("annotation " + std::to_string(f.ann) + " not found in " + f.coco);
    }
    center = fovea_center(it->bbox, img.dims());
  }
  if (!center) center = PixelPoint{img.width() / 2, img.height() / 2};

  const SampleGrid grid = build_grid({img.dims(), target, *center},
                                     f.strict ? BudgetPolicy::Strict : BudgetPolicy::Rebalance);
  save_image(foveate_image(img, grid), f.output);
  if (f.print_grid) {
    out << grid_json(grid).dump() << '\n';
  } else {
    out << "wrote " << f.output << " (" << size_dir(target) << ") fovea at " << center->x << ','
        << center->y << '\n';
  }
  return kOk;
}

int cmd_grid(const Options& o, std::ostream& out) {
  const auto& g = o.grid;
  const ImageDims source = parse_dims(g.source);
  const ImageDims target = parse_dims(g.size);
  const PixelPoint center = g.center.empty() ? PixelPoint{source.width / 2, source.height / 2}
                                             : parse_point(g.center);
  const SampleGrid grid = build_grid({source, target, center},
                                     g.strict ? BudgetPolicy::Strict : BudgetPolicy::Rebalance);
  out << grid_json(grid).dump() << '\n';
  return kOk;
}

int cmd_dataset(const Options& o, std::ostream& out, std::ostream& err) {
  const auto& d = o.dataset;
  require_file(d.input, "annotation file");
  if (!fs::is_directory(d.images)) throw UsageError("images directory '" + d.images + "' not found");
  if (d.workers < 1) throw UsageError("--workers must be >= 1");
  SpawnMode mode;
  try {
    mode = parse_spawn_mode(d.mode);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto sizes = d.sizes.empty() ? default_sizes() : parse_size_list(d.sizes);
  for (const auto& s : sizes) {
    if (s.width <= 0 || s.height <= 0) throw UsageError("sizes must be positive");
    if (mode == SpawnMode::Foveated && (s.width % 2 || s.height % 2)) {
      throw UsageError("foveated sizes must be even, got " + size_dir(s));
    }
  }
  const auto categories = d.categories.empty() ? default_categories()
                                               : parse_int_list(d.categories, "category id");

  const CocoSubset subset = load_coco(d.input, categories);

  const fs::path out_root(d.output);
  for (const auto& s : sizes) fs::create_directories(out_root / size_dir(s));

  const fs::path images_dir(d.images);
  ImageLoader loader = [&](const CocoImage& im) { return load_image(images_dir / im.file_name); };
  ImageSink sink = [&](const ManifestEntry& e, const RasterImage& img) {
    save_image(img, out_root / size_dir(e.target) / e.file);
  };
  SpawnOptions options;
  options.workers = d.workers;
  options.policy = d.strict ? BudgetPolicy::Strict : BudgetPolicy::Rebalance;

  const auto manifests = size_sweep(subset, sizes, mode, loader, sink, options);
  std::size_t failures = 0;
  for (const auto& m : manifests) {
    const fs::path dir = out_root / size_dir(m.target);
    write_manifest(m, dir / "manifest.jsonl");
    const fs::path failure_file = dir / "failures.jsonl";
    if (!m.failures.empty()) {
      std::ofstream f(failure_file, std::ios::binary | std::ios::trunc);
      write_failures(m, f);
    } else if (fs::exists(failure_file)) {
      fs::remove(failure_file);
    }
    failures += m.failures.size();
    out << size_dir(m.target) << ": " << m.entries.size() << " entries from "
        << subset.images.size() << " images (" << to_string(mode) << "), " << m.failures.size()
        << " failures\n";
  }
  if (!subset.rejected.empty()) {
    err << "rejected " << subset.rejected.size() << " zero-area annotations\n";
  }
  return failures == 0 ? kOk : kIoError;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const auto& e = o.eval;
  if (e.inputs.size() != e.detections.size()) {
    throw UsageError("need one --detections file per --input manifest");
  }
  if (!(e.iou > 0.0 && e.iou <= 1.0)) throw UsageError("--iou must lie in (0, 1]");
  for (const auto& p : e.inputs) require_file(p, "manifest");
  for (const auto& p : e.detections) require_file(p, "detections");
  std::optional<ImageDims> baseline;
  if (!e.baseline.empty()) baseline = parse_dims(e.baseline);

  std::vector<DatasetManifest> manifests;
  std::vector<std::vector<Detection>> detections;
  for (std::size_t i = 0; i < e.inputs.size(); ++i) {
    manifests.push_back(read_manifest(fs::path(e.inputs[i])));
    detections.push_back(read_detections(fs::path(e.detections[i])));
  }
  std::vector<SweepInput> inputs;
  for (std::size_t i = 0; i < manifests.size(); ++i) {
    inputs.push_back({manifests[i].target, &manifests[i], detections[i]});
  }
  EvalOptions options;
  options.iou_threshold = e.iou;
  options.min_confidence = e.min_confidence;
  options.source_space = e.source_space;
  const auto rows = sweep_report(inputs, options);

  if (e.output.empty()) {
    write_report_csv(rows, out);
  } else {
    std::ofstream f(e.output, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + e.output);
    write_report_csv(rows, f);
    for (const auto& r : rows) {
      out << size_dir(r.size) << ' ' << to_string(r.region) << ": precision " << r.precision()
          << " recall " << r.recall() << '\n';
    }
  }
  if (baseline) {
    for (const auto& r : relative_to_baseline(rows, *baseline)) {
      out << "relative " << size_dir(r.size) << ' ' << to_string(r.region) << ": recall "
          << r.recall.value() << " precision " << r.precision.value() << '\n';
    }
  }
  return kOk;
}

int cmd_bench(const Options& o, std::ostream& out) {
  const auto& b = o.bench;
  BenchConfig cfg;
  cfg.source = parse_dims(b.source);
  cfg.sizes = b.sizes.empty() ? default_sizes() : parse_size_list(b.sizes);
  if (b.reps < 1) throw UsageError("--reps must be >= 1");
  if (b.warmup < 0) throw UsageError("--warmup must be >= 0");
  if (b.workers < 1) throw UsageError("--workers must be >= 1");
  if (b.op != "foveate" && b.op != "uniform") throw UsageError("--op must be foveate or uniform");
  cfg.repetitions = b.reps;
  cfg.warmup = b.warmup;
  cfg.seed = b.seed;
  cfg.workers = b.workers;
  cfg.reuse_grid = !b.rebuild_grid;
  cfg.op = b.op == "uniform" ? BenchOp::Uniform : BenchOp::Foveate;
  if (!b.output.empty()) {
    const fs::path parent = fs::path(b.output).parent_path();
    if (!parent.empty() && !fs::is_directory(parent)) {
      throw UsageError("output directory '" + parent.string() + "' not found");
    }
  }
  const auto results = run_bench(cfg);
  if (b.output.empty()) {
    write_bench_csv(results, out);
  } else {
    std::ofstream f(b.output, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + b.output);
    write_bench_csv(results, f);
    out << "wrote " << results.size() << " rows to " << b.output << '\n';
  }
  return kOk;
}

std::vector<EccentricityPoint> read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  std::vector<EccentricityPoint> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto parts = split(line, ',');
    if (parts.size() != 2) throw Error(ErrorCode::MalformedJson, "table rows need 2 columns: " + line);
    try {
      rows.push_back({std::stod(std::string(parts[0])), std::stod(std::string(parts[1]))});
    } catch (const std::exception&) {
      if (rows.empty()) continue;  // header
      throw Error(ErrorCode::MalformedJson, "bad table row: " + line);
    }
  }
  return rows;
}

int cmd_fit(const Options& o, std::ostream& out) {
  std::vector<EccentricityPoint> table;
  if (o.fit.input.empty()) {
    const auto w = wilson_table();
    table.assign(w.begin(), w.end());
  } else {
    require_file(o.fit.input, "table");
    table = read_table_csv(o.fit.input);
  }
  const FitResult fit = fit_eccentricity(table);
  out << "model: fields = scale * ln(1 + eccentricity / offset)\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "scale=%.6f offset=%.6f rmse=%.6f rows=%zu\n", fit.scale, fit.offset,
                fit.rmse, table.size());
  out << buf;
  return kOk;
}

void report(std::ostream& err, bool as_json, int code, std::string_view kind, const std::string& msg) {
  if (as_json) {
    err << json{{"error", kind}, {"message", msg}, {"exit_code", code}}.dump() << '\n';
  } else {
    err << "fovea: " << msg << '\n';
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Foveated image sampling toolkit", "fovea"};
  app.require_subcommand(1, 1);
  app.add_flag("--json", o.json_diagnostics, "Single-line JSON diagnostics on stderr");

  auto* fov = app.add_subcommand("foveate", "Foveate one image");
  fov->add_option("--input", o.foveate.input, "Input PNG or JPEG")->required();
  fov->add_option("--output", o.foveate.output, "Output PNG")->required();
  fov->add_option("--size", o.foveate.size, "Target size WxH")->required();
  fov->add_option("--center", o.foveate.center, "Fovea center X,Y (default: image center)");
  fov->add_option("--coco", o.foveate.coco, "COCO file for --ann");
  fov->add_option("--ann", o.foveate.ann, "Center the fovea on this annotation's box");
  fov->add_flag("--print-grid", o.foveate.print_grid, "Print the sample grid as JSON");
  fov->add_flag("--strict-halves", o.foveate.strict, "Exactly n/2 samples per half-axis");

  auto* grd = app.add_subcommand("grid", "Print a sample grid as JSON");
  grd->add_option("--source", o.grid.source, "Source size WxH")->required();
  grd->add_option("--size", o.grid.size, "Target size WxH")->required();
  grd->add_option("--center", o.grid.center, "Fovea center X,Y (default: source center)");
  grd->add_flag("--strict-halves", o.grid.strict, "Exactly n/2 samples per half-axis");

  auto* ds = app.add_subcommand("dataset", "Spawn one image per object for each size");
  ds->add_option("--input", o.dataset.input, "COCO annotation JSON")->required();
  ds->add_option("--images", o.dataset.images, "Directory with the source images")->required();
  ds->add_option("--output", o.dataset.output, "Output directory")->required();
  ds->add_option("--sizes", o.dataset.sizes, "Comma-separated sizes (default 96..416 step 32)");
  ds->add_option("--mode", o.dataset.mode, "foveated or uniform");
  ds->add_option("--categories", o.dataset.categories, "Comma-separated category ids");
  ds->add_option("--workers", o.dataset.workers, "Worker threads");
  ds->add_flag("--strict-halves", o.dataset.strict, "Exactly n/2 samples per half-axis");

  auto* ev = app.add_subcommand("eval", "Foveal/peripheral precision and recall");
  ev->add_option("--input", o.eval.inputs, "Manifest JSONL (repeatable)")->required();
  ev->add_option("--detections", o.eval.detections, "Detections JSONL (one per manifest)")->required();
  ev->add_option("--output", o.eval.output, "CSV report (default stdout)");
  ev->add_option("--iou", o.eval.iou, "IoU threshold");
  ev->add_option("--min-confidence", o.eval.min_confidence, "Drop detections below this confidence");
  ev->add_flag("--source-space", o.eval.source_space, "Evaluate in source-image coordinates");
  ev->add_option("--baseline", o.eval.baseline, "Also print ratios to this size, e.g. 416x416");

  auto* bn = app.add_subcommand("bench", "Time foveation across sizes");
  bn->add_option("--sizes", o.bench.sizes, "Comma-separated sizes (default 96..416 step 32)");
  bn->add_option("--source", o.bench.source, "Synthetic source size WxH");
  bn->add_option("--reps", o.bench.reps, "Timed repetitions per size");
  bn->add_option("--warmup", o.bench.warmup, "Untimed warmup iterations");
  bn->add_option("--seed", o.bench.seed, "Synthetic image seed");
  bn->add_option("--workers", o.bench.workers, "Threads (aggregate throughput)");
  bn->add_option("--op", o.bench.op, "foveate or uniform");
  bn->add_flag("--rebuild-grid", o.bench.rebuild_grid, "Build the grid for every image");
  bn->add_option("--output", o.bench.output, "CSV output (default stdout)");

  auto* ft = app.add_subcommand("fit", "Fit the log eccentricity model");
  ft->add_option("--input", o.fit.input, "CSV of eccentricity,fields (default: built-in table)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    report(err, o.json_diagnostics, kBadArgs, "BadArgs", e.what());
    return kBadArgs;
  }

  try {
    if (*fov) return cmd_foveate(o, out);
    if (*grd) return cmd_grid(o, out);
    if (*ds) return cmd_dataset(o, out, err);
    if (*ev) return cmd_eval(o, out);
    if (*bn) return cmd_bench(o, out);
    if (*ft) return cmd_fit(o, out);
  } catch (const UsageError& e) {
    report(err, o.json_diagnostics, kBadArgs, "BadArgs", e.what());
    return kBadArgs;
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    report(err, o.json_diagnostics, code, to_string(e.code()), e.what());
    return code;
  } catch (const fs::filesystem_error& e) {
    report(err, o.json_diagnostics, kIoError, "IoFailure", e.what());
    return kIoError;
  }
  return kBadArgs;
}

}  // namespace fovea::cli
