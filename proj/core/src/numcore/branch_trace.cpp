#include "lfsr/numcore/branch_trace.hpp"

#include "lfsr/numcore/errors.hpp"

namespace lfsr {
namespace {
thread_local BranchTrace* g_active = nullptr;
}

BranchTrace::BranchTrace() {
  if (g_active != nullptr) throw StateError("BranchTrace: a trace is already active on this thread");
  g_active = this;
}

BranchTrace::~BranchTrace() { g_active = nullptr; }

BranchTrace* BranchTrace::active() { return g_active; }

}  // namespace lfsr
