#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

#include "lfsr/numcore/tensor.hpp"

namespace lfsr {

// Ordered log of the primitive operations executed while it is active.
// Construction activates the record for the calling thread; destruction
// deactivates it. At most one record per scalar type may be active on a
// thread.
template <typename T>
class DiffRecord {
 public:
  using Impl = detail::TensorImpl<T>;
  using BackwardFn = std::function<void(std::span<const T> grad_out)>;

  struct Node {
    std::shared_ptr<Impl> output;
    std::vector<std::shared_ptr<Impl>> inputs;
    BackwardFn backward;
  };

  DiffRecord();
  ~DiffRecord();
  DiffRecord(const DiffRecord&) = delete;
  DiffRecord& operator=(const DiffRecord&) = delete;

  std::uint64_t id() const { return id_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }

  static DiffRecord* active();

  void push(Node node) { nodes_.push_back(std::move(node)); }

 private:
  std::uint64_t id_;
  std::vector<Node> nodes_;
};

// Accumulates d(loss)/d(x) into the grad buffer of every tensor that
// participated in `record` and needs a gradient. Accumulation is additive.
template <typename T>
void backward(const Tensor<T>& loss, DiffRecord<T>& record);

namespace detail {

template <typename T>
bool needs_grad(const TensorImpl<T>& t) {
  if (t.requires_grad) return true;
  auto* rec = DiffRecord<T>::active();
  return rec != nullptr && t.tape_id.has_value() && *t.tape_id == rec->id();
}

// Gradient buffer of `t` (zero-filled on first use), or an empty span when
// `t` does not need a gradient.
template <typename T>
std::span<T> grad_sink(TensorImpl<T>& t) {
  if (!t.requires_grad && !t.tape_id.has_value()) return {};
  if (t.grad.empty()) t.grad.assign(t.data.size(), T(0));
  return t.grad;
}

// Registers `out` as produced from `inputs` when a record is active and any
// input needs a gradient.
template <typename T>
void record_op(Tensor<T>& out, std::initializer_list<const Tensor<T>*> inputs,
               typename DiffRecord<T>::BackwardFn fn) {
  auto* rec = DiffRecord<T>::active();
  if (rec == nullptr) return;
  bool any = false;
  for (const auto* in : inputs) any = any || needs_grad(*in->impl());
  if (!any) return;
  typename DiffRecord<T>::Node node;
  node.output = out.impl();
  for (const auto* in : inputs) node.inputs.push_back(in->impl());
  node.backward = std::move(fn);
  out.impl()->tape_id = rec->id();
  rec->push(std::move(node));
}

template <typename T>
void record_op(Tensor<T>& out, const std::vector<Tensor<T>>& inputs,
               typename DiffRecord<T>::BackwardFn fn) {
  auto* rec = DiffRecord<T>::active();
  if (rec == nullptr) return;
  bool any = false;
  for (const auto& in : inputs) any = any || needs_grad(*in.impl());
  if (!any) return;
  typename DiffRecord<T>::Node node;
  node.output = out.impl();
  for (const auto& in : inputs) node.inputs.push_back(in.impl());
  node.backward = std::move(fn);
  out.impl()->tape_id = rec->id();
  rec->push(std::move(node));
}

}  // namespace detail

extern template class DiffRecord<float>;
extern template class DiffRecord<double>;

}  // namespace lfsr
