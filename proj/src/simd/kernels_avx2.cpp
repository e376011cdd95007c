// Compiled with -mavx2 (no -mfma) on x86-64 only.
#include "pcgrasp/simd/kernels.hpp"

#include <immintrin.h>

#include <limits>

namespace pcgrasp::simd {
namespace {

void transform_points_avx2(const double* r, const double* t, PointsView in,
                           MutablePointsView out) {
  const __m256d r0 = _mm256_set1_pd(r[0]), r1 = _mm256_set1_pd(r[1]), r2 = _mm256_set1_pd(r[2]);
  const __m256d r3 = _mm256_set1_pd(r[3]), r4 = _mm256_set1_pd(r[4]), r5 = _mm256_set1_pd(r[5]);
  const __m256d r6 = _mm256_set1_pd(r[6]), r7 = _mm256_set1_pd(r[7]), r8 = _mm256_set1_pd(r[8]);
  const __m256d t0 = _mm256_set1_pd(t[0]), t1 = _mm256_set1_pd(t[1]), t2 = _mm256_set1_pd(t[2]);
  std::size_t i = 0;
  for (; i + 4 <= in.size; i += 4) {
    const __m256d x = _mm256_loadu_pd(in.x + i);
    const __m256d y = _mm256_loadu_pd(in.y + i);
    const __m256d z = _mm256_loadu_pd(in.z + i);
    __m256d ox = _mm256_add_pd(_mm256_mul_pd(r0, x), _mm256_mul_pd(r1, y));
    ox = _mm256_add_pd(_mm256_add_pd(ox, _mm256_mul_pd(r2, z)), t0);
    __m256d oy = _mm256_add_pd(_mm256_mul_pd(r3, x), _mm256_mul_pd(r4, y));
    oy = _mm256_add_pd(_mm256_add_pd(oy, _mm256_mul_pd(r5, z)), t1);
    __m256d oz = _mm256_add_pd(_mm256_mul_pd(r6, x), _mm256_mul_pd(r7, y));
    oz = _mm256_add_pd(_mm256_add_pd(oz, _mm256_mul_pd(r8, z)), t2);
    _mm256_storeu_pd(out.x + i, ox);
    _mm256_storeu_pd(out.y + i, oy);
    _mm256_storeu_pd(out.z + i, oz);
  }
  for (; i < in.size; ++i) {
    const double x = in.x[i], y = in.y[i], z = in.z[i];
    out.x[i] = ((r[0] * x + r[1] * y) + r[2] * z) + t[0];
    out.y[i] = ((r[3] * x + r[4] * y) + r[5] * z) + t[1];
    out.z[i] = ((r[6] * x + r[7] * y) + r[8] * z) + t[2];
  }
}

double min_squared_distance_avx2(double qx, double qy, double qz, PointsView p) {
  const __m256d vx = _mm256_set1_pd(qx), vy = _mm256_set1_pd(qy), vz = _mm256_set1_pd(qz);
  __m256d best4 = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= p.size; i += 4) {
    const __m256d dx = _mm256_sub_pd(vx, _mm256_loadu_pd(p.x + i));
    const __m256d dy = _mm256_sub_pd(vy, _mm256_loadu_pd(p.y + i));
    const __m256d dz = _mm256_sub_pd(vz, _mm256_loadu_pd(p.z + i));
    const __m256d d2 = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
                                     _mm256_mul_pd(dz, dz));
    best4 = _mm256_min_pd(best4, d2);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best4);
  double best = lanes[0];
  for (int k = 1; k < 4; ++k)
    if (lanes[k] < best) best = lanes[k];
  for (; i < p.size; ++i) {
    const double dx = qx - p.x[i];
    const double dy = qy - p.y[i];
    const double dz = qz - p.z[i];
    const double d2 = (dx * dx + dy * dy) + dz * dz;
    if (d2 < best) best = d2;
  }
  return best;
}

void collision_penalty_avx2(const double* d, std::size_t n, double eps, double* value,
                            double* slope) {
  const double half_eps_s = 0.5 * eps;
  const double two_eps_s = 2.0 * eps;
  const __m256d zero = _mm256_setzero_pd();
  const __m256d minus_one = _mm256_set1_pd(-1.0);
  const __m256d veps = _mm256_set1_pd(eps);
  const __m256d half_eps = _mm256_set1_pd(half_eps_s);
  const __m256d two_eps = _mm256_set1_pd(two_eps_s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d di = _mm256_loadu_pd(d + i);
    const __m256d inside = _mm256_cmp_pd(di, zero, _CMP_LT_OQ);
    const __m256d near = _mm256_andnot_pd(inside, _mm256_cmp_pd(di, veps, _CMP_LE_OQ));
    const __m256d t = _mm256_sub_pd(di, veps);
    const __m256d quad_v = _mm256_div_pd(_mm256_mul_pd(t, t), two_eps);
    const __m256d quad_s = _mm256_div_pd(t, veps);
    const __m256d lin_v = _mm256_add_pd(_mm256_sub_pd(zero, di), half_eps);
    __m256d v = _mm256_and_pd(near, quad_v);
    __m256d s = _mm256_and_pd(near, quad_s);
    v = _mm256_blendv_pd(v, lin_v, inside);
    s = _mm256_blendv_pd(s, minus_one, inside);
    _mm256_storeu_pd(value + i, v);
    _mm256_storeu_pd(slope + i, s);
  }
  for (; i < n; ++i) {
    const double di = d[i];
    if (di < 0.0) {
      value[i] = -di + half_eps_s;
      slope[i] = -1.0;
    } else if (di <= eps) {
      const double t = di - eps;
      value[i] = (t * t) / two_eps_s;
      slope[i] = t / eps;
    } else {
      value[i] = 0.0;
      slope[i] = 0.0;
    }
  }
}

const KernelTable kAvx2Table{Backend::avx2, &transform_points_avx2, &min_squared_distance_avx2,
                             &collision_penalty_avx2};

}  // namespace

namespace detail {
const KernelTable* avx2_table_if_compiled() { return &kAvx2Table; }
}  // namespace detail

}  // namespace pcgrasp::simd
