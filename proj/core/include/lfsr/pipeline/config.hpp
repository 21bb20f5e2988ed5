#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace lfsr {

enum class Stage { kAhqrg, kTtsr, kLfrefine };

std::string_view stage_name(Stage stage);
// Throws ArgumentError for anything but "ahqrg", "ttsr" or "lfrefine".
Stage parse_stage(std::string_view name);

struct TrainConfig {
  Stage stage = Stage::kAhqrg;
  double lr = 1e-4;
  int batch_size = 1;
  long steps = 1000;
  std::uint64_t seed = 0;
  double lambda_epi = 1.0;  // lfrefine only
  std::filesystem::path dataset;
  std::filesystem::path checkpoint;
  // Side of the square low-resolution training crop; 0 trains on whole
  // scenes. The refinement stage crops 4x this at high resolution.
  int crop = 0;
  // Number of leading dataset scenes to train on; 0 uses all of them.
  int scenes = 0;

  // Throws ArgumentError unless steps >= 1, lr > 0, batch_size >= 1,
  // lambda_epi >= 0, crop >= 0 and scenes >= 0.
  void validate() const;
};

// Parses UTF-8 `key=value` lines. Blank lines and lines starting with '#'
// are skipped; whitespace around keys and values is trimmed. Unknown or
// repeated keys and malformed values throw FormatError citing the line.
// Keys absent from the text keep `base`'s values. The result is validated.
TrainConfig parse_train_config(std::string_view text, TrainConfig base = {});
TrainConfig load_train_config(const std::filesystem::path& path, TrainConfig base = {});

// Inverse of parse_train_config.
std::string format_train_config(const TrainConfig& config);

}  // namespace lfsr
