#include "fovea/manifest.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "fovea/error.hpp"

namespace fovea {

namespace {

using nlohmann::json;

json box_json(const BBox& b) { return json::array({b.x, b.y, b.w, b.h}); }

BBox box_from(const json& j, Space space) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorCode::MalformedJson, "bbox must be [x,y,w,h]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>(), space};
}

ImageDims dims_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::MalformedJson, "dims must be [W,H]");
  return {j[0].get<int>(), j[1].get<int>()};
}

const json& field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::MissingField, std::string("missing \"") + key + "\"");
  return *it;
}

}  // namespace

std::string entry_to_json_line(const ManifestEntry& e, SpawnMode mode) {
  json objects = json::array();
  for (const auto& o : e.objects) {
    objects.push_back({{"ann_id", o.ann_id},
                       {"class_id", o.class_id},
                       {"bbox", box_json(o.bbox)},
                       {"source_bbox", box_json(o.source_bbox)},
                       {"is_foveal", o.is_foveal},
                       {"degenerate", o.degenerate}});
  }
  json j = {{"file", e.file},
            {"mode", std::string(to_string(mode))},
            {"image_id", e.image_id},
            {"fovea_ann_id", e.fovea_ann_id},
            {"source", {e.source.width, e.source.height}},
            {"target", {e.target.width, e.target.height}},
            {"center", {e.center.x, e.center.y}},
            {"objects", std::move(objects)}};
  return j.dump();
}

void write_manifest(const DatasetManifest& manifest, std::ostream& out) {
  for (const auto& e : manifest.entries) out << entry_to_json_line(e, manifest.mode) << '\n';
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  write_manifest(manifest, out);
  if (!out) throw Error(ErrorCode::IoFailure, "write failed: " + path.string());
}

void write_failures(const DatasetManifest& manifest, std::ostream& out) {
  for (const auto& f : manifest.failures) {
    out << json{{"image_id", f.image_id}, {"file_name", f.file_name}, {"reason", f.reason}}.dump()
        << '\n';
  }
}

DatasetManifest read_manifest(std::istream& in) {
  DatasetManifest m;
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      ManifestEntry e;
      e.file = field(j, "file").get<std::string>();
      const SpawnMode mode = parse_spawn_mode(field(j, "mode").get<std::string>());
      e.image_id = field(j, "image_id").get<std::int64_t>();
      e.fovea_ann_id = field(j, "fovea_ann_id").get<std::int64_t>();
      e.source = dims_from(field(j, "source"));
      e.target = dims_from(field(j, "target"));
      const json& c = field(j, "center");
      if (!c.is_array() || c.size() != 2) throw Error(ErrorCode::MalformedJson, "center must be [x,y]");
      e.center = {c[0].get<int>(), c[1].get<int>()};
      for (const json& o : field(j, "objects")) {
        GroundTruthObject g;
        g.ann_id = field(o, "ann_id").get<std::int64_t>();
        g.class_id = field(o, "class_id").get<int>();
        g.bbox = box_from(field(o, "bbox"), Space::Target);
        g.source_bbox = box_from(field(o, "source_bbox"), Space::Source);
        g.is_foveal = field(o, "is_foveal").get<bool>();
        g.degenerate = o.value("degenerate", false);
        e.objects.push_back(g);
      }
      if (first) {
        m.mode = mode;
        m.target = e.target;
        first = false;
      } else if (mode != m.mode || e.target != m.target) {
        throw Error(ErrorCode::MalformedJson, "entries mix modes or target sizes");
      }
      m.entries.push_back(std::move(e));
    } catch (const json::exception& err) {
      throw Error(ErrorCode::MalformedJson, "manifest line " + std::to_string(line_no) + ": " + err.what());
    } catch (const Error& err) {
      throw Error(err.code(), "manifest line " + std::to_string(line_no) + ": " + err.what());
    }
  }
  return m;
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return read_manifest(in);
}

}  // namespace fovea
