#include <algorithm>
#include <cmath>

#include "hopfmcf/kernels.hpp"
#include "kernel_common.hpp"

namespace hopfmcf::kernels::scalar {

void flow_step(const FlowStepArgs& args) {
  for (std::size_t k = 0; k < args.n; ++k) detail::flow_vertex(args, k);
}

void fiber_sweep(const FiberSweepArgs& args) {
  for (std::size_t k = 0; k < args.lift.size(); ++k) {
    args.out[k] = detail::fiber_point(args.lift[k], args.cos_beta, args.sin_beta, args.scale);
  }
}

double lagrangian_residual_row(const ResidualRowArgs& args) {
  double worst = 0;
  const std::size_t n = args.row.size();
  for (std::size_t k = 1; k + 1 < n; ++k) worst = std::max(worst, detail::residual_at(args, k));
  return worst;
}

}  // namespace hopfmcf::kernels::scalar
