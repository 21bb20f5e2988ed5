#include "lfsr/numcore/params.hpp"

#include <cmath>

#include "lfsr/numcore/errors.hpp"

namespace lfsr {

template <typename T>
void StageWeights<T>::add(std::string name, Tensor<T> tensor) {
  if (contains(name)) throw ArgumentError("stage '" + stage_ + "': duplicate entry '" + name + "'");
  tensor.set_requires_grad(true);
  entries_.push_back(Entry{std::move(name), std::move(tensor)});
}

template <typename T>
bool StageWeights<T>::contains(std::string_view name) const {
  for (const auto& e : entries_)
    if (e.name == name) return true;
  return false;
}

template <typename T>
const Tensor<T>& StageWeights<T>::at(std::string_view name) const {
  for (const auto& e : entries_)
    if (e.name == name) return e.tensor;
  throw StateError("stage '" + stage_ + "' has no entry '" + std::string(name) + "'");
}

template <typename T>
Tensor<T>& StageWeights<T>::at(std::string_view name) {
  return const_cast<Tensor<T>&>(std::as_const(*this).at(name));
}

template <typename T>
std::int64_t StageWeights<T>::parameter_count() const {
  std::int64_t n = 0;
  for (const auto& e : entries_) n += e.tensor.numel();
  return n;
}

template <typename T>
void StageWeights<T>::zero_grad() {
  for (auto& e : entries_) e.tensor.zero_grad();
}

template <typename T>
bool StageWeights<T>::all_finite() const {
  for (const auto& e : entries_)
    for (T v : e.tensor.data())
      if (!std::isfinite(v)) return false;
  return true;
}

template class StageWeights<float>;
template class StageWeights<double>;

}  // namespace lfsr
