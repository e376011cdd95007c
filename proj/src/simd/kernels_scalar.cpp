#include "pcgrasp/simd/kernels.hpp"

#include <limits>

namespace pcgrasp::simd {
namespace {

void transform_points_scalar(const double* r, const double* t, PointsView in,
                             MutablePointsView out) {
  for (std::size_t i = 0; i < in.size; ++i) {
    const double x = in.x[i], y = in.y[i], z = in.z[i];
    out.x[i] = ((r[0] * x + r[1] * y) + r[2] * z) + t[0];
    out.y[i] = ((r[3] * x + r[4] * y) + r[5] * z) + t[1];
    out.z[i] = ((r[6] * x + r[7] * y) + r[8] * z) + t[2];
  }
}

double min_squared_distance_scalar(double qx, double qy, double qz, PointsView p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size; ++i) {
    const double dx = qx - p.x[i];
    const double dy = qy - p.y[i];
    const double dz = qz - p.z[i];
    const double d2 = (dx * dx + dy * dy) + dz * dz;
    if (d2 < best) best = d2;
  }
  return best;
}

void collision_penalty_scalar(const double* d, std::size_t n, double eps, double* value,
                              double* slope) {
  const double half_eps = 0.5 * eps;
  const double two_eps = 2.0 * eps;
  for (std::size_t i = 0; i < n; ++i) {
    const double di = d[i];
    if (di < 0.0) {
      value[i] = -di + half_eps;
      slope[i] = -1.0;
    } else if (di <= eps) {
      const double t = di - eps;
      value[i] = (t * t) / two_eps;
      slope[i] = t / eps;
    } else {
      value[i] = 0.0;
      slope[i] = 0.0;
    }
  }
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{Backend::scalar, &transform_points_scalar,
                               &min_squared_distance_scalar, &collision_penalty_scalar};
}  // namespace detail

}  // namespace pcgrasp::simd
