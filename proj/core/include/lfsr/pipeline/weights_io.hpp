#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "lfsr/numcore/params.hpp"

namespace lfsr {

inline constexpr char kWeightsMagic[4] = {'L', 'F', 'W', 'T'};
inline constexpr std::uint32_t kWeightsVersion = 1;

// Little-endian layout:
//   "LFWT" | u32 version | u16 len + stage name | u32 entry count |
//   per entry: u16 len + name | u8 rank | u32 dims[rank] | f32 values.
// Optimizer moments are not stored. Values are always written as 32-bit.
template <typename T>
std::string encode_weights(const StageWeights<T>& weights);
template <typename T>
StageWeights<T> decode_weights(std::string_view bytes);

template <typename T>
void save_weights(const StageWeights<T>& weights, const std::filesystem::path& path);
// Throws FormatError on bad magic, unknown version or truncation.
template <typename T>
StageWeights<T> load_weights(const std::filesystem::path& path);

}  // namespace lfsr
