#pragma once

#include <cstdint>

namespace lfsr {

// Fingerprint of the branch decisions taken by non-smooth primitives (relu
// and clamp masks, abs signs, argmax picks) on the calling thread while the
// trace is alive. Two evaluations with equal fingerprints ran inside the same
// differentiable piece. Traces do not nest.
class BranchTrace {
 public:
  BranchTrace();
  ~BranchTrace();
  BranchTrace(const BranchTrace&) = delete;
  BranchTrace& operator=(const BranchTrace&) = delete;

  std::uint64_t fingerprint() const { return hash_; }
  void mix(std::uint64_t value) {
    hash_ ^= value + 0x9e3779b97f4a7c15ULL + (hash_ << 6) + (hash_ >> 2);
    hash_ *= 0x100000001b3ULL;
  }

  static BranchTrace* active();

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

namespace detail {

// Packs a run of boolean decisions into words before mixing.
class BranchMixer {
 public:
  explicit BranchMixer(BranchTrace* trace) : trace_(trace) {}
  ~BranchMixer() {
    if (trace_ != nullptr && count_ % 64 != 0) trace_->mix(word_);
  }
  void push(bool bit) {
    word_ = (word_ << 1) | static_cast<std::uint64_t>(bit);
    if (++count_ % 64 == 0) {
      trace_->mix(word_);
      word_ = 0;
    }
  }

 private:
  BranchTrace* trace_;
  std::uint64_t word_ = 0;
  std::uint64_t count_ = 0;
};

}  // namespace detail
}  // namespace lfsr
