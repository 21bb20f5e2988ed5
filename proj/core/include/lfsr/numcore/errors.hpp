#pragma once

#include <stdexcept>
#include <string>

namespace lfsr {

// Tensor extents or channel counts do not line up.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// A scalar or index argument is out of its valid domain.
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

// The call is valid in isolation but not in the current object state
// (missing gradients, missing stage weights, loss outside a record, ...).
class StateError : public std::logic_error {
 public:
  explicit StateError(const std::string& what) : std::logic_error(what) {}
};

// A serialized file does not follow its binary or text format.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Light-field directories that cannot be read into a LightField.
class IngestionError : public std::runtime_error {
 public:
  explicit IngestionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lfsr
