#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fovea/fovea.hpp"

namespace fovea::testing {

std::filesystem::path fixture_dir();
std::filesystem::path coco_fixture_path();

/// Writes a deterministic PNG for every image listed in the COCO fixture.
void write_fixture_images(const std::filesystem::path& dir);

/// Fresh empty directory under the system temp dir; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// Diagonal gradient with a per-image seed; RGB.
RasterImage pattern_image(ImageDims dims, int seed);

/// Result of invoking the CLI in-process.
struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace fovea::testing
