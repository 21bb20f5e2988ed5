#include "lfsr/lightfield/io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>

#include "lfsr/numcore/errors.hpp"

namespace fs = std::filesystem;

namespace lfsr {

Rgb8Image read_png_rgb(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IngestionError("cannot read PNG " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  Rgb8Image out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IngestionError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  return out;
}

void write_png_rgb(const fs::path& path, const Rgb8Image& img) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.pixels.data(), 0, nullptr)) {
    throw std::runtime_error("PNG sizing failed for " + path.string() + ": " + image.message);
  }
  std::string buffer(size, '\0');
  if (!png_image_write_to_memory(&image, buffer.data(), &size, 0, img.pixels.data(), 0, nullptr)) {
    throw std::runtime_error("PNG encoding failed for " + path.string() + ": " + image.message);
  }
  buffer.resize(size);
  write_bytes_atomic(path, buffer);
}

void write_bytes_atomic(const fs::path& path, std::string_view bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string view_filename(int u, int v) {
  char name[32];
  std::snprintf(name, sizeof(name), "view_%02d_%02d.png", u, v);
  return name;
}

LightField load_lightfield(const fs::path& directory) {
  if (!fs::is_directory(directory)) throw IngestionError("not a light-field directory: " + directory.string());
  static const std::regex pattern(R"(view_(\d{2})_(\d{2})\.png)");
  int max_u = -1, max_v = -1;
  for (const auto& entry : fs::directory_iterator(directory)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, pattern)) {
      max_u = std::max(max_u, std::stoi(m[1]));
      max_v = std::max(max_v, std::stoi(m[2]));
    }
  }
  if (max_u < 0) throw IngestionError("no view_{uu}_{vv}.png files in " + directory.string());
  const int u_extent = max_u + 1, v_extent = max_v + 1;
  for (int u = 0; u < u_extent; ++u)
    for (int v = 0; v < v_extent; ++v)
      if (!fs::exists(directory / view_filename(u, v))) {
        throw IngestionError("missing view (" + std::to_string(u) + "," + std::to_string(v) + "): " +
                             (directory / view_filename(u, v)).string());
      }

  LfExtent e{u_extent, v_extent, 0, 0, 3};
  std::vector<float> values;
  for (int u = 0; u < u_extent; ++u) {
    for (int v = 0; v < v_extent; ++v) {
      const Rgb8Image img = read_png_rgb(directory / view_filename(u, v));
      if (e.h == 0) {
        e.h = img.height;
        e.w = img.width;
        values.reserve(static_cast<std::size_t>(e.count()));
      } else if (img.height != e.h || img.width != e.w) {
        throw IngestionError("view (" + std::to_string(u) + "," + std::to_string(v) + ") is " +
                             std::to_string(img.width) + "x" + std::to_string(img.height) + ", expected " +
                             std::to_string(e.w) + "x" + std::to_string(e.h));
      }
      for (auto p : img.pixels) values.push_back(static_cast<float>(p) / 255.0f);
    }
  }
  return LightField(e, std::move(values));
}

void save_lightfield(const LightField& lf, const fs::path& directory) {
  const auto& e = lf.extent();
  if (e.c != 3) throw DimensionError("save_lightfield: only 3-channel light fields can be written as PNG");
  fs::create_directories(directory);
  const std::size_t view_size = static_cast<std::size_t>(e.h) * e.w * 3;
  for (int u = 0; u < e.u; ++u) {
    for (int v = 0; v < e.v; ++v) {
      Rgb8Image img{e.w, e.h, std::vector<std::uint8_t>(view_size)};
      auto src = lf.values().subspan(static_cast<std::size_t>(lf.index(u, v, 0, 0, 0)), view_size);
      for (std::size_t i = 0; i < view_size; ++i) {
        img.pixels[i] = static_cast<std::uint8_t>(std::lround(std::clamp(src[i], 0.0f, 1.0f) * 255.0f));
      }
      write_png_rgb(directory / view_filename(u, v), img);
    }
  }
}

Rgb8Image view_to_rgb8(std::span<const float> chw, int height, int width) {
  const std::size_t plane = static_cast<std::size_t>(height) * width;
  if (chw.size() != plane * 3) throw DimensionError("view_to_rgb8: expected a [3,H,W] view");
  Rgb8Image img{width, height, std::vector<std::uint8_t>(plane * 3)};
  for (std::size_t p = 0; p < plane; ++p)
    for (std::size_t c = 0; c < 3; ++c)
      img.pixels[p * 3 + c] = static_cast<std::uint8_t>(std::lround(std::clamp(chw[c * plane + p], 0.0f, 1.0f) * 255.0f));
  return img;
}

void save_view_png(const fs::path& path, std::span<const float> chw, int height, int width) {
  write_png_rgb(path, view_to_rgb8(chw, height, width));
}

}  // namespace lfsr
