#include <atomic>
#include <cstdlib>
#include <string_view>

#include "hopfmcf/kernels.hpp"

namespace hopfmcf::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("HOPFMCF_SIMD"); env && std::string_view(env) == "scalar") {
    return Isa::scalar;
  }
  return avx2_supported() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_supported() {
#if defined(HOPFMCF_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  current().store(isa == Isa::avx2 && !avx2_supported() ? Isa::scalar : isa,
                  std::memory_order_relaxed);
}

#if defined(HOPFMCF_HAVE_AVX2)
#define HOPFMCF_DISPATCH(fn, args) \
  (active_isa() == Isa::avx2 ? avx2::fn(args) : scalar::fn(args))
#else
#define HOPFMCF_DISPATCH(fn, args) scalar::fn(args)
#endif

void flow_step(const FlowStepArgs& args) { HOPFMCF_DISPATCH(flow_step, args); }
void fiber_sweep(const FiberSweepArgs& args) { HOPFMCF_DISPATCH(fiber_sweep, args); }
double lagrangian_residual_row(const ResidualRowArgs& args) {
  return HOPFMCF_DISPATCH(lagrangian_residual_row, args);
}

#undef HOPFMCF_DISPATCH

}  // namespace hopfmcf::kernels
