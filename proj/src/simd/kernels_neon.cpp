// Compiled only on aarch64, where Advanced SIMD is part of the base ISA.
#include "pcgrasp/simd/kernels.hpp"

#include <arm_neon.h>

#include <limits>

namespace pcgrasp::simd {
namespace {

void transform_points_neon(const double* r, const double* t, PointsView in,
                           MutablePointsView out) {
  std::size_t i = 0;
  for (; i + 2 <= in.size; i += 2) {
    const float64x2_t x = vld1q_f64(in.x + i);
    const float64x2_t y = vld1q_f64(in.y + i);
    const float64x2_t z = vld1q_f64(in.z + i);
    // vmulq + vaddq rather than vfmaq to stay bit-identical with the scalar path.
    float64x2_t ox = vaddq_f64(vmulq_n_f64(x, r[0]), vmulq_n_f64(y, r[1]));
    ox = vaddq_f64(vaddq_f64(ox, vmulq_n_f64(z, r[2])), vdupq_n_f64(t[0]));
    float64x2_t oy = vaddq_f64(vmulq_n_f64(x, r[3]), vmulq_n_f64(y, r[4]));
    oy = vaddq_f64(vaddq_f64(oy, vmulq_n_f64(z, r[5])), vdupq_n_f64(t[1]));
    float64x2_t oz = vaddq_f64(vmulq_n_f64(x, r[6]), vmulq_n_f64(y, r[7]));
    oz = vaddq_f64(vaddq_f64(oz, vmulq_n_f64(z, r[8])), vdupq_n_f64(t[2]));
    vst1q_f64(out.x + i, ox);
    vst1q_f64(out.y + i, oy);
    vst1q_f64(out.z + i, oz);
  }
  for (; i < in.size; ++i) {
    const double x = in.x[i], y = in.y[i], z = in.z[i];
    out.x[i] = ((r[0] * x + r[1] * y) + r[2] * z) + t[0];
    out.y[i] = ((r[3] * x + r[4] * y) + r[5] * z) + t[1];
    out.z[i] = ((r[6] * x + r[7] * y) + r[8] * z) + t[2];
  }
}

double min_squared_distance_neon(double qx, double qy, double qz, PointsView p) {
  const float64x2_t vx = vdupq_n_f64(qx), vy = vdupq_n_f64(qy), vz = vdupq_n_f64(qz);
  float64x2_t best2 = vdupq_n_f64(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 2 <= p.size; i += 2) {
    const float64x2_t dx = vsubq_f64(vx, vld1q_f64(p.x + i));
    const float64x2_t dy = vsubq_f64(vy, vld1q_f64(p.y + i));
    const float64x2_t dz = vsubq_f64(vz, vld1q_f64(p.z + i));
    const float64x2_t d2 =
        vaddq_f64(vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)), vmulq_f64(dz, dz));
    best2 = vminq_f64(best2, d2);
  }
  double best = vminvq_f64(best2);
  for (; i < p.size; ++i) {
    const double dx = qx - p.x[i];
    const double dy = qy - p.y[i];
    const double dz = qz - p.z[i];
    const double d2 = (dx * dx + dy * dy) + dz * dz;
    if (d2 < best) best = d2;
  }
  return best;
}

void collision_penalty_neon(const double* d, std::size_t n, double eps, double* value,
                            double* slope) {
  const double half_eps_s = 0.5 * eps;
  const double two_eps_s = 2.0 * eps;
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t veps = vdupq_n_f64(eps);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t di = vld1q_f64(d + i);
    const uint64x2_t inside = vcltq_f64(di, zero);
    const uint64x2_t near = vandq_u64(vcleq_f64(di, veps), vmvnq_u64(inside));
    const float64x2_t t = vsubq_f64(di, veps);
    const float64x2_t quad_v = vdivq_f64(vmulq_f64(t, t), vdupq_n_f64(two_eps_s));
    const float64x2_t quad_s = vdivq_f64(t, veps);
    const float64x2_t lin_v = vaddq_f64(vnegq_f64(di), vdupq_n_f64(half_eps_s));
    float64x2_t v = vbslq_f64(near, quad_v, zero);
    float64x2_t s = vbslq_f64(near, quad_s, zero);
    v = vbslq_f64(inside, lin_v, v);
    s = vbslq_f64(inside, vdupq_n_f64(-1.0), s);
    vst1q_f64(value + i, v);
    vst1q_f64(slope + i, s);
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

const KernelTable kNeonTable{Backend::neon, &transform_points_neon, &min_squared_distance_neon,
                             &collision_penalty_neon};

}  // namespace

namespace detail {
const KernelTable* neon_table_if_compiled() { return &kNeonTable; }
}  // namespace detail

}  // namespace pcgrasp::simd
