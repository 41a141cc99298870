#include "fixtures.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cli.hpp"

#ifndef FOVEA_FIXTURE_DIR
#error "FOVEA_FIXTURE_DIR must be defined"
#endif

namespace fovea::testing {

namespace fs = std::filesystem;

fs::path fixture_dir() { return FOVEA_FIXTURE_DIR; }
fs::path coco_fixture_path() { return fixture_dir() / "coco_fixture.json"; }

RasterImage pattern_image(ImageDims dims, int seed) {
  RasterImage img(dims, 3);
  for (int y = 0; y < dims.height; ++y) {
    for (int x = 0; x < dims.width; ++x) {
      img.at(x, y, 0) = static_cast<std::uint8_t>((x + seed * 17) & 0xFF);
      img.at(x, y, 1) = static_cast<std::uint8_t>((y * 3 + seed) & 0xFF);
      img.at(x, y, 2) = static_cast<std::uint8_t>(((x ^ y) + seed * 5) & 0xFF);
    }
  }
  return img;
}

void write_fixture_images(const fs::path& dir) {
  fs::create_directories(dir);
  const auto subset = load_coco(coco_fixture_path(), default_categories());
  int seed = 0;
  for (const auto& im : subset.images) save_image(pattern_image(im.dims, ++seed), dir / im.file_name);
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("fovea-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

CliResult run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"fovea"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace fovea::testing
