#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fovea/bbox.hpp"

namespace fovea {

struct CocoImage {
  std::int64_t id = 0;
  std::string file_name;
  ImageDims dims;
};

struct CocoAnnotation {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  int category_id = 0;
  BBox bbox;  // source space, [x, y, w, h] as stored in the file
};

struct CocoRejection {
  std::int64_t ann_id = 0;
  std::string reason;
};

/// Category-filtered view of a COCO annotation file. Images are sorted by id
/// and annotations by (image_id, id); only images with at least one kept
/// annotation are listed.
struct CocoSubset {
  std::vector<CocoImage> images;
  std::vector<CocoAnnotation> annotations;
  std::vector<int> categories;
  std::map<int, std::string> category_names;
  /// Annotations in allowed categories that were dropped (zero-area boxes).
  std::vector<CocoRejection> rejected;
  /// Annotations skipped because their category is not allowed.
  std::size_t filtered_out = 0;

  const CocoImage* find_image(std::int64_t image_id) const;
  std::span<const CocoAnnotation> annotations_of(std::int64_t image_id) const;
};

/// COCO ids of the first twenty listed categories: person through cow
/// (ids 1-11 and 13-21; COCO has no id 12).
std::vector<int> default_categories();

/// Parses COCO annotation JSON (images/annotations/categories arrays) and
/// keeps annotations whose category is in `allowed`.
/// Throws MalformedJson, MissingField (including an annotation referencing an
/// unknown image) or EmptyAfterFilter.
CocoSubset parse_coco(std::string_view json, std::span<const int> allowed);

CocoSubset load_coco(const std::filesystem::path& path, std::span<const int> allowed);

}  // namespace fovea
