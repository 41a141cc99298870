#include "fovea/coco.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "fovea/error.hpp"

namespace fovea {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    throw Error(ErrorCode::MissingField, where + " has no \"" + key + "\"");
  }
  return *it;
}

template <typename T>
T get_as(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::MalformedJson, where + " field \"" + key + "\" has the wrong type");
  }
}

const json& require_array(const json& root, const char* key) {
  const json& v = require(root, key, "annotation file");
  if (!v.is_array()) throw Error(ErrorCode::MalformedJson, std::string("\"") + key + "\" is not an array");
  return v;
}

}  // namespace

const CocoImage* CocoSubset::find_image(std::int64_t image_id) const {
  const auto it = std::lower_bound(images.begin(), images.end(), image_id,
                                   [](const CocoImage& im, std::int64_t id) { return im.id < id; });
  return it != images.end() && it->id == image_id ? &*it : nullptr;
}

std::span<const CocoAnnotation> CocoSubset::annotations_of(std::int64_t image_id) const {
  const auto lo = std::lower_bound(annotations.begin(), annotations.end(), image_id,
                                   [](const CocoAnnotation& a, std::int64_t id) { return a.image_id < id; });
  const auto hi = std::upper_bound(annotations.begin(), annotations.end(), image_id,
                                   [](std::int64_t id, const CocoAnnotation& a) { return id < a.image_id; });
  return {lo, hi};
}

std::vector<int> default_categories() {
  return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 14, 15, 16, 17, 18, 19, 20, 21};
}

CocoSubset parse_coco(std::string_view text, std::span<const int> allowed) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::MalformedJson, "top level is not an object");

  const std::set<int> allowed_set(allowed.begin(), allowed.end());
  CocoSubset out;
  out.categories.assign(allowed_set.begin(), allowed_set.end());

  if (const auto it = root.find("categories"); it != root.end() && it->is_array()) {
    for (const json& c : *it) {
      const int id = get_as<int>(c, "id", "category");
      if (allowed_set.count(id) && c.contains("name") && c["name"].is_string()) {
        out.category_names[id] = c["name"].get<std::string>();
      }
    }
  }

  std::unordered_map<std::int64_t, CocoImage> images;
  for (const json& im : require_array(root, "images")) {
    CocoImage img;
    img.id = get_as<std::int64_t>(im, "id", "image");
    const std::string where = "image " + std::to_string(img.id);
    img.file_name = get_as<std::string>(im, "file_name", where);
    img.dims = {get_as<int>(im, "width", where), get_as<int>(im, "height", where)};
    images.emplace(img.id, std::move(img));
  }

  std::set<std::int64_t> used_images;
  for (const json& a : require_array(root, "annotations")) {
    CocoAnnotation ann;
    ann.id = get_as<std::int64_t>(a, "id", "annotation");
    const std::string where = "annotation " + std::to_string(ann.id);
    ann.image_id = get_as<std::int64_t>(a, "image_id", where);
    ann.category_id = get_as<int>(a, "category_id", where);
    if (!images.count(ann.image_id)) {
      throw Error(ErrorCode::MissingField,
                  where + " references unknown image_id " + std::to_string(ann.image_id));
    }
    const auto box = get_as<std::vector<double>>(a, "bbox", where);
    if (box.size() != 4) throw Error(ErrorCode::MalformedJson, where + " bbox must have 4 numbers");
    if (!allowed_set.count(ann.category_id)) {
      ++out.filtered_out;
      continue;
    }
    ann.bbox = {box[0], box[1], box[2], box[3], Space::Source};
    if (!(ann.bbox.w > 0) || !(ann.bbox.h > 0)) {
      out.rejected.push_back({ann.id, "zero-area bbox"});
      continue;
    }
    used_images.insert(ann.image_id);
    out.annotations.push_back(ann);
  }
  if (out.annotations.empty()) {
    throw Error(ErrorCode::EmptyAfterFilter, "no annotations left after category filtering");
  }
  std::sort(out.annotations.begin(), out.annotations.end(), [](const auto& a, const auto& b) {
    return a.image_id != b.image_id ? a.image_id < b.image_id : a.id < b.id;
  });
  for (std::int64_t id : used_images) out.images.push_back(images.at(id));
  return out;
}

CocoSubset load_coco(const std::filesystem::path& path, std::span<const int> allowed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_coco(buf.str(), allowed);
}

}  // namespace fovea
