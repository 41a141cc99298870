#include "fovea/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <tuple>
#include <unordered_map>

#include <json.hpp>

#include "fovea/error.hpp"

namespace fovea {

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::MissingField, std::string("missing \"") + key + "\"");
  return *it;
}

std::string size_str(ImageDims d) {
  return std::to_string(d.width) + "x" + std::to_string(d.height);
}

}  // namespace

std::vector<Detection> read_detections(std::istream& in) {
  std::vector<Detection> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      Detection d;
      d.entry = field(j, "entry").get<std::string>();
      d.class_id = field(j, "class_id").get<int>();
      const json& b = field(j, "bbox");
      if (!b.is_array() || b.size() != 4) throw Error(ErrorCode::MalformedJson, "bbox must be [x,y,w,h]");
      d.bbox = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>(),
                Space::Target};
      d.confidence = field(j, "confidence").get<double>();
      if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
        throw Error(ErrorCode::MalformedJson, "confidence outside [0,1]");
      }
      out.push_back(std::move(d));
    } catch (const json::exception& err) {
      throw Error(ErrorCode::MalformedJson, "detections line " + std::to_string(line_no) + ": " + err.what());
    } catch (const Error& err) {
      throw Error(err.code(), "detections line " + std::to_string(line_no) + ": " + err.what());
    }
  }
  return out;
}

std::vector<Detection> read_detections(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return read_detections(in);
}

void write_detections(std::span<const Detection> detections, std::ostream& out) {
  for (const auto& d : detections) {
    out << json{{"entry", d.entry},
                {"class_id", d.class_id},
                {"bbox", {d.bbox.x, d.bbox.y, d.bbox.w, d.bbox.h}},
                {"confidence", d.confidence}}
               .dump()
        << '\n';
  }
}

std::vector<Match> match(std::span<const GroundTruthObject> ground_truth,
                         std::span<const Detection> detections, double iou_threshold) {
  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&](std::size_t i) {
    const Detection& d = detections[i];
    return std::make_tuple(-d.confidence, d.bbox.x, d.bbox.y, d.bbox.w, d.bbox.h, d.class_id);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

  std::vector<bool> taken(ground_truth.size(), false);
  std::vector<Match> out;
  out.reserve(detections.size());
  for (std::size_t di : order) {
    const Detection& d = detections[di];
    Match m{di, std::nullopt, 0.0};
    double best = -1.0;
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      if (taken[g] || ground_truth[g].class_id != d.class_id) continue;
      const double v = iou(d.bbox, ground_truth[g].bbox);
      if (v > best) {
        best = v;
        m.ground_truth = g;
      }
    }
    if (m.ground_truth && best >= iou_threshold) {
      m.iou = best;
      taken[*m.ground_truth] = true;
    } else {
      m.ground_truth.reset();
      m.iou = std::max(best, 0.0);
    }
    out.push_back(m);
  }
  return out;
}

std::string_view to_string(Region region) noexcept {
  switch (region) {
    case Region::Foveal: return "foveal";
    case Region::Peripheral: return "peripheral";
    case Region::All: return "all";
  }
  return "all";
}

Fraction Fraction::of(std::int64_t num, std::int64_t den) {
  if (den == 0) return {0, 0};
  const std::int64_t g = std::gcd(num, den);
  return g == 0 ? Fraction{0, 1} : Fraction{num / g, den / g};
}

namespace {

bool in_region(const GroundTruthObject& o, Region region) {
  if (o.degenerate) return false;
  switch (region) {
    case Region::Foveal: return o.is_foveal;
    case Region::Peripheral: return !o.is_foveal;
    case Region::All: return true;
  }
  return false;
}

// Detection moved into source space; unmappable boxes become empty and can
// only count as false positives.
Detection to_source(const Detection& d, const ManifestEntry& entry, SpawnMode mode,
                    const std::optional<SampleGrid>& grid) {
  Detection out = d;
  const BBox clamped = clamp_to(d.bbox, entry.target);
  if (mode == SpawnMode::Uniform) {
    out.bbox = scale_bbox(clamped, entry.target, entry.source, Space::Source).box;
    return out;
  }
  try {
    out.bbox = inverse_transform_bbox(*grid, clamped);
  } catch (const Error&) {
    out.bbox = {0, 0, 0, 0, Space::Source};
  }
  return out;
}

}  // namespace

MetricsReport region_report(const DatasetManifest& manifest, std::span<const Detection> detections,
                            Region region, const EvalOptions& options) {
  MetricsReport report;
  report.region = region;
  report.size = manifest.target;
  report.iou_threshold = options.iou_threshold;

  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) index.emplace(manifest.entries[i].file, i);
  std::vector<std::vector<Detection>> per_entry(manifest.entries.size());
  for (const Detection& d : detections) {
    const auto it = index.find(d.entry);
    if (it == index.end()) throw Error(ErrorCode::UnknownEntry, "no manifest entry named '" + d.entry + "'");
    if (d.confidence < options.min_confidence) continue;
    per_entry[it->second].push_back(d);
  }

  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const ManifestEntry& entry = manifest.entries[i];
    std::vector<GroundTruthObject> gt;
    for (const auto& o : entry.objects) {
      if (!in_region(o, region)) continue;
      GroundTruthObject g = o;
      if (options.source_space) g.bbox = o.source_bbox;
      gt.push_back(g);
    }
    std::vector<Detection> dets;
    dets.reserve(per_entry[i].size());
    std::optional<SampleGrid> grid;
    if (options.source_space && manifest.mode == SpawnMode::Foveated && !per_entry[i].empty()) {
      grid = entry_grid(entry, options.policy);
    }
    for (const Detection& d : per_entry[i]) {
      if (options.source_space) {
        dets.push_back(to_source(d, entry, manifest.mode, grid));
      } else {
        Detection c = d;
        c.bbox = clamp_to(d.bbox, entry.target);
        dets.push_back(std::move(c));
      }
    }

    std::vector<bool> gt_hit(gt.size(), false);
    for (const Match& m : match(gt, dets, options.iou_threshold)) {
      const int cls = dets[m.detection].class_id;
      if (m.ground_truth) {
        gt_hit[*m.ground_truth] = true;
        ++report.per_class[cls].tp;
        ++report.totals.tp;
      } else {
        ++report.per_class[cls].fp;
        ++report.totals.fp;
      }
    }
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (!gt_hit[g]) {
        ++report.per_class[gt[g].class_id].fn;
        ++report.totals.fn;
      }
    }
  }
  return report;
}

MetricsReport foveal_report(const DatasetManifest& manifest, std::span<const Detection> detections,
                            const EvalOptions& options) {
  return region_report(manifest, detections, Region::Foveal, options);
}

MetricsReport peripheral_report(const DatasetManifest& manifest,
                                std::span<const Detection> detections,
                                const EvalOptions& options) {
  return region_report(manifest, detections, Region::Peripheral, options);
}

std::vector<MetricsReport> sweep_report(std::span<const SweepInput> inputs,
                                        const EvalOptions& options) {
  std::vector<MetricsReport> rows;
  for (const SweepInput& in : inputs) {
    if (!in.manifest) throw Error(ErrorCode::InvalidSpec, "sweep input without a manifest");
    for (Region r : {Region::Foveal, Region::Peripheral, Region::All}) {
      MetricsReport rep = region_report(*in.manifest, in.detections, r, options);
      rep.size = in.size;
      rows.push_back(std::move(rep));
    }
  }
  return rows;
}

std::vector<RelativeRow> relative_to_baseline(std::span<const MetricsReport> rows,
                                              ImageDims baseline) {
  auto ratio = [](Fraction a, Fraction b) {
    if (!a.defined() || !b.defined() || b.num == 0) return Fraction{0, 0};
    return Fraction::of(a.num * b.den, a.den * b.num);
  };
  std::vector<RelativeRow> out;
  for (const MetricsReport& row : rows) {
    const auto base = std::find_if(rows.begin(), rows.end(), [&](const MetricsReport& r) {
      return r.size == baseline && r.region == row.region;
    });
    if (base == rows.end()) {
      throw Error(ErrorCode::InvalidSpec, "no baseline row for " + size_str(baseline) + " " +
                                              std::string(to_string(row.region)));
    }
    out.push_back({row.size, row.region, ratio(row.recall_ratio(), base->recall_ratio()),
                   ratio(row.precision_ratio(), base->precision_ratio())});
  }
  return out;
}

void write_report_csv(std::span<const MetricsReport> rows, std::ostream& out) {
  out << "size,region,tp,fp,fn,precision,recall\n";
  char buf[64];
  for (const MetricsReport& r : rows) {
    out << size_str(r.size) << ',' << to_string(r.region) << ',' << r.totals.tp << ','
        << r.totals.fp << ',' << r.totals.fn << ',';
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", r.precision(), r.recall());
    out << buf << '\n';
  }
}

}  // namespace fovea
