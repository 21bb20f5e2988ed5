#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lfsr/lightfield/lightfield.hpp"

namespace lfsr {

// 8-bit interleaved RGB raster.
struct Rgb8Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

Rgb8Image read_png_rgb(const std::filesystem::path& path);
void write_png_rgb(const std::filesystem::path& path, const Rgb8Image& image);

// Writes to a sibling temporary file and renames it over `path`.
void write_bytes_atomic(const std::filesystem::path& path, std::string_view bytes);

// "view_{uu}_{vv}.png" with zero-padded two-digit indices.
std::string view_filename(int u, int v);

// Reads every view_{uu}_{vv}.png of `directory`; values are pixel / 255.
// Throws IngestionError naming a missing (u,v) or a size mismatch.
LightField load_lightfield(const std::filesystem::path& directory);

// Writes one PNG per view with round-to-nearest 8-bit quantisation.
void save_lightfield(const LightField& lf, const std::filesystem::path& directory);

// [3,H,W] tensor in [0,1] <-> PNG.
Rgb8Image view_to_rgb8(std::span<const float> chw, int height, int width);
void save_view_png(const std::filesystem::path& path, std::span<const float> chw, int height, int width);

}  // namespace lfsr
