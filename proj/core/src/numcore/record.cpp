#include "lfsr/numcore/record.hpp"

#include <atomic>

#include "lfsr/numcore/errors.hpp"

namespace lfsr {
namespace {

std::atomic<std::uint64_t> next_record_id{1};

template <typename T>
DiffRecord<T>*& active_slot() {
  thread_local DiffRecord<T>* slot = nullptr;
  return slot;
}

}  // namespace

template <typename T>
DiffRecord<T>::DiffRecord() : id_(next_record_id.fetch_add(1)) {
  auto*& slot = active_slot<T>();
  if (slot != nullptr) throw StateError("a DiffRecord is already active on this thread");
  slot = this;
}

template <typename T>
DiffRecord<T>::~DiffRecord() {
  auto*& slot = active_slot<T>();
  if (slot == this) slot = nullptr;
}

template <typename T>
DiffRecord<T>* DiffRecord<T>::active() {
  return active_slot<T>();
}

template <typename T>
void backward(const Tensor<T>& loss, DiffRecord<T>& record) {
  if (!loss.defined() || loss.numel() != 1) {
    throw ArgumentError("backward: loss must be a scalar, got shape " +
                        (loss.defined() ? shape_string(loss.shape()) : std::string("<undefined>")));
  }
  if (!loss.tape_id() || *loss.tape_id() != record.id()) {
    throw StateError("backward: loss was not produced within this record");
  }
  auto& seed = *loss.impl();
  if (seed.grad.empty()) seed.grad.assign(1, T(0));
  seed.grad[0] += T(1);

  const auto& nodes = record.nodes();
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    if (it->output->grad.empty()) continue;
    it->backward(it->output->grad);
  }
}

template class DiffRecord<float>;
template class DiffRecord<double>;
template void backward<float>(const Tensor<float>&, DiffRecord<float>&);
template void backward<double>(const Tensor<double>&, DiffRecord<double>&);

}  // namespace lfsr
