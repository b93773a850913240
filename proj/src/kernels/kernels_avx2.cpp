// AVX2 variants.  This translation unit is compiled with -mavx2 and is only
// entered after the dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <algorithm>

#include "hopfmcf/kernels.hpp"
#include "kernel_common.hpp"

namespace hopfmcf::kernels::avx2 {

namespace {

inline __m256d dot3(__m256d ax, __m256d ay, __m256d az, __m256d bx, __m256d by, __m256d bz) {
  return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(ax, bx), _mm256_mul_pd(ay, by)),
                       _mm256_mul_pd(az, bz));
}

inline __m256d load4(const Point4& p) { return _mm256_loadu_pd(&p.a); }

// (a,b,c,d) -> (-b,a,-d,c)
inline __m256d jmul(__m256d p) {
  const __m256d sign = _mm256_setr_pd(-1.0, 1.0, -1.0, 1.0);
  return _mm256_mul_pd(_mm256_permute_pd(p, 0b0101), sign);
}

// (p0 + p1) + (p2 + p3) for two vectors at once: returns {sum(u), sum(v)}.
inline __m128d pair_sums(__m256d u, __m256d v) {
  const __m256d h = _mm256_hadd_pd(u, v);  // (u0+u1, v0+v1, u2+u3, v2+v3)
  return _mm_add_pd(_mm256_castpd256_pd128(h), _mm256_extractf128_pd(h, 1));
}

}  // namespace

void flow_step(const FlowStepArgs& a) {
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d dt = _mm256_set1_pd(a.dt);
  const __m256d radius = _mm256_set1_pd(a.radius);
  std::size_t k = 0;
  for (; k + 4 <= a.n; k += 4) {
    const std::size_t i = k + 1;
    const __m256d px = _mm256_loadu_pd(a.x + i - 1), cx = _mm256_loadu_pd(a.x + i),
                  nx = _mm256_loadu_pd(a.x + i + 1);
    const __m256d py = _mm256_loadu_pd(a.y + i - 1), cy = _mm256_loadu_pd(a.y + i),
                  ny = _mm256_loadu_pd(a.y + i + 1);
    const __m256d pz = _mm256_loadu_pd(a.z + i - 1), cz = _mm256_loadu_pd(a.z + i),
                  nz = _mm256_loadu_pd(a.z + i + 1);
    const __m256d lm = _mm256_loadu_pd(a.seg + k);
    const __m256d lp = _mm256_loadu_pd(a.seg + k + 1);
    const __m256d sum = _mm256_add_pd(lm, lp);

    auto second_diff = [&](__m256d prev, __m256d cur, __m256d next) {
      const __m256d fwd = _mm256_div_pd(_mm256_sub_pd(next, cur), lp);
      const __m256d bwd = _mm256_div_pd(_mm256_sub_pd(cur, prev), lm);
      return _mm256_div_pd(_mm256_mul_pd(two, _mm256_sub_pd(fwd, bwd)), sum);
    };
    const __m256d ax = second_diff(px, cx, nx);
    const __m256d ay = second_diff(py, cy, ny);
    const __m256d az = second_diff(pz, cz, nz);

    const __m256d s = _mm256_div_pd(dot3(ax, ay, az, cx, cy, cz), dot3(cx, cy, cz, cx, cy, cz));
    const __m256d kx = _mm256_sub_pd(ax, _mm256_mul_pd(s, cx));
    const __m256d ky = _mm256_sub_pd(ay, _mm256_mul_pd(s, cy));
    const __m256d kz = _mm256_sub_pd(az, _mm256_mul_pd(s, cz));
    _mm256_storeu_pd(a.kappa_x + k, kx);
    _mm256_storeu_pd(a.kappa_y + k, ky);
    _mm256_storeu_pd(a.kappa_z + k, kz);
    _mm256_storeu_pd(a.kappa_norm + k, _mm256_sqrt_pd(dot3(kx, ky, kz, kx, ky, kz)));

    const __m256d mx = _mm256_add_pd(cx, _mm256_mul_pd(dt, kx));
    const __m256d my = _mm256_add_pd(cy, _mm256_mul_pd(dt, ky));
    const __m256d mz = _mm256_add_pd(cz, _mm256_mul_pd(dt, kz));
    const __m256d f = _mm256_div_pd(radius, _mm256_sqrt_pd(dot3(mx, my, mz, mx, my, mz)));
    _mm256_storeu_pd(a.out_x + k, _mm256_mul_pd(mx, f));
    _mm256_storeu_pd(a.out_y + k, _mm256_mul_pd(my, f));
    _mm256_storeu_pd(a.out_z + k, _mm256_mul_pd(mz, f));
  }
  for (; k < a.n; ++k) detail::flow_vertex(a, k);
}

void fiber_sweep(const FiberSweepArgs& a) {
  const __m256d cs = _mm256_set1_pd(a.cos_beta);
  const __m256d sn = _mm256_set1_pd(a.sin_beta);
  const __m256d scale = _mm256_set1_pd(a.scale);
  for (std::size_t k = 0; k < a.lift.size(); ++k) {
    const __m256d p = load4(a.lift[k]);
    const __m256d r = _mm256_add_pd(_mm256_mul_pd(cs, p), _mm256_mul_pd(sn, jmul(p)));
    _mm256_storeu_pd(&a.out[k].a, _mm256_mul_pd(r, scale));
  }
}

double lagrangian_residual_row(const ResidualRowArgs& a) {
  const std::size_t n = a.row.size();
  if (n < 3) return 0.0;
  const __m256d sb = _mm256_set1_pd(a.inv_2dbeta);
  const __m256d sv = _mm256_set1_pd(a.inv_2dv);
  double worst = 0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const __m256d db = _mm256_mul_pd(_mm256_sub_pd(load4(a.next[k]), load4(a.prev[k])), sb);
    const __m256d dv = _mm256_mul_pd(_mm256_sub_pd(load4(a.row[k + 1]), load4(a.row[k - 1])), sv);
    const __m128d wb = pair_sums(_mm256_mul_pd(jmul(db), dv), _mm256_mul_pd(db, db));
    const __m128d vv = pair_sums(_mm256_mul_pd(dv, dv), _mm256_mul_pd(dv, dv));
    const double w = _mm_cvtsd_f64(wb);
    const double nb = _mm_cvtsd_f64(_mm_unpackhi_pd(wb, wb));
    const double nv = _mm_cvtsd_f64(vv);
    worst = std::max(worst, detail::residual_ratio(w, nb, nv));
  }
  return worst;
}

}  // namespace hopfmcf::kernels::avx2
