#include "fovea/image_io.hpp"

#include <png.h>
#include <jpeglib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "fovea/error.hpp"

namespace fovea {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return f;
}

// libpng reports errors through longjmp; message is captured here first.
struct PngErrorState {
  std::string message;
};

void png_error_fn(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngErrorState*>(png_get_error_ptr(png));
  if (state) state->message = msg ? msg : "unknown libpng error";
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

RasterImage load_png(std::FILE* file, const std::string& name) {
  PngErrorState err;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warning_fn);
  if (!png) throw Error(ErrorCode::DecodeError, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::DecodeError, "png_create_info_struct failed");
  }
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  int width = 0;
  int height = 0;
  int channels = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::DecodeError, name + ": " + err.message);
  }
  png_init_io(png, file);
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::DecodeError, name + ": unexpected channel count " + std::to_string(channels));
  }
  pixels.resize(static_cast<std::size_t>(width) * height * channels);
  rows.resize(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = pixels.data() + static_cast<std::size_t>(y) * width * channels;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return RasterImage({width, height}, channels, std::move(pixels));
}

struct JpegErrorState {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
  std::array<char, JMSG_LENGTH_MAX> message{};
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* state = reinterpret_cast<JpegErrorState*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, state->message.data());
  std::longjmp(state->jump, 1);
}

RasterImage load_jpeg(std::FILE* file, const std::string& name) {
  jpeg_decompress_struct cinfo{};
  JpegErrorState err{};
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = jpeg_error_exit;
  std::vector<std::uint8_t> pixels;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw Error(ErrorCode::DecodeError, name + ": " + err.message.data());
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);
  const int width = static_cast<int>(cinfo.output_width);
  const int height = static_cast<int>(cinfo.output_height);
  const int channels = cinfo.output_components;
  pixels.resize(static_cast<std::size_t>(width) * height * channels);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * channels;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return RasterImage({width, height}, channels, std::move(pixels));
}

// Kept free of objects with destructors: libpng errors longjmp out of here.
bool write_png(std::FILE* file, const RasterImage& img, const png_const_bytep* rows,
               PngErrorState& err) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warning_fn);
  if (!png) {
    err.message = "png_create_write_struct failed";
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    err.message = "png_create_info_struct failed";
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, file);
  png_set_IHDR(png, info, img.width(), img.height(), 8,
               img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  png_write_rows(png, const_cast<png_bytepp>(rows), img.height());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

}  // namespace

RasterImage load_image(const std::filesystem::path& path) {
  auto file = open_file(path, "rb");
  std::array<unsigned char, 8> sig{};
  const std::size_t n = std::fread(sig.data(), 1, sig.size(), file.get());
  std::rewind(file.get());
  if (n == 8 && png_sig_cmp(sig.data(), 0, 8) == 0) return load_png(file.get(), path.string());
  if (n >= 3 && sig[0] == 0xFF && sig[1] == 0xD8 && sig[2] == 0xFF) {
    return load_jpeg(file.get(), path.string());
  }
  throw Error(ErrorCode::UnsupportedFormat, path.string() + ": not a PNG or JPEG file");
}

void save_image(const RasterImage& img, const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext != ".png") {
    throw Error(ErrorCode::UnsupportedFormat, path.string() + ": only PNG output is supported");
  }
  if (img.width() <= 0 || img.height() <= 0) {
    throw Error(ErrorCode::DimensionMismatch, "cannot save an empty image");
  }
  std::vector<png_const_bytep> rows(img.height());
  const std::size_t stride = static_cast<std::size_t>(img.width()) * img.channels();
  for (int y = 0; y < img.height(); ++y) rows[y] = img.pixels().data() + y * stride;
  auto file = open_file(path, "wb");
  PngErrorState err;
  if (!write_png(file.get(), img, rows.data(), err)) {
    throw Error(ErrorCode::IoFailure, path.string() + ": " + err.message);
  }
  if (std::fflush(file.get()) != 0) throw Error(ErrorCode::IoFailure, path.string() + ": flush failed");
}

}  // namespace fovea
