#include "kzwork/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kzwork/errors.hpp"

namespace kzwork::kernels {
namespace {

Isa detect() {
  if (const char* env = std::getenv("KZWORK_ISA"); env && std::strcmp(env, "scalar") == 0) {
    return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2()) throw DomainError("avx2 kernels requested on a CPU without AVX2/FMA");
  current().store(isa, std::memory_order_relaxed);
}

const Table& active() { return active_isa() == Isa::avx2 ? avx2::table() : scalar::table(); }

}  // namespace kzwork::kernels
