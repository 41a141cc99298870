#pragma once

#include <filesystem>

#include "fovea/raster.hpp"

namespace fovea {

/// Loads a PNG or JPEG (detected from the file signature). Alpha is dropped,
/// palette and 16-bit PNGs are expanded/stripped to 8-bit gray or RGB.
/// Throws IoFailure, UnsupportedFormat or DecodeError.
RasterImage load_image(const std::filesystem::path& path);

/// Writes a lossless PNG. Output bytes are a pure function of the image.
/// Throws UnsupportedFormat for non-.png paths, IoFailure on write errors.
void save_image(const RasterImage& img, const std::filesystem::path& path);

}  // namespace fovea
