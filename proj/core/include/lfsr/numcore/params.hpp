#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lfsr/numcore/tensor.hpp"

namespace lfsr {

template <typename T>
struct AdamMoments {
  std::vector<T> first;
  std::vector<T> second;
};

// Named, ordered parameter collection of one network stage plus its
// optimizer moments. Names are unique.
template <typename T>
class StageWeights {
 public:
  struct Entry {
    std::string name;
    Tensor<T> tensor;
  };

  StageWeights() = default;
  explicit StageWeights(std::string stage) : stage_(std::move(stage)) {}

  const std::string& stage() const { return stage_; }

  // Adds a trainable tensor; duplicate names are rejected.
  void add(std::string name, Tensor<T> tensor);
  bool contains(std::string_view name) const;
  // Throws StateError naming the stage and entry when absent.
  const Tensor<T>& at(std::string_view name) const;
  Tensor<T>& at(std::string_view name);

  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<Entry>& entries() { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::int64_t parameter_count() const;

  void zero_grad();
  bool all_finite() const;

  std::vector<AdamMoments<T>>& optimizer_state() { return moments_; }
  const std::vector<AdamMoments<T>>& optimizer_state() const { return moments_; }

  // Deep copy, converting precision. Optimizer moments are not carried over.
  template <typename U>
  StageWeights<U> cast() const {
    StageWeights<U> out(stage_);
    for (const auto& e : entries_) out.add(e.name, tensor_cast<U>(e.tensor));
    return out;
  }
  StageWeights clone() const { return cast<T>(); }

 private:
  std::string stage_;
  std::vector<Entry> entries_;
  std::vector<AdamMoments<T>> moments_;
};

extern template class StageWeights<float>;
extern template class StageWeights<double>;

}  // namespace lfsr
