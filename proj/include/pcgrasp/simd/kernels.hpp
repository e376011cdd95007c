#pragma once

// Data-parallel inner loops with a scalar reference implementation and
// vectorized variants chosen at runtime. Every variant must produce results
// bit-identical to the scalar kernels: no fused multiply-add, same operation
// order per lane.

#include <cstddef>
#include <span>
#include <string_view>

namespace pcgrasp::simd {

enum class Backend { scalar, avx2, neon };

/// Structure-of-arrays view over 3D points.
struct PointsView {
  const double* x;
  const double* y;
  const double* z;
  std::size_t size;
};

struct MutablePointsView {
  double* x;
  double* y;
  double* z;
  std::size_t size;
};

struct KernelTable {
  Backend backend;
  /// out = R * p + t for each point. rotation is 9 values, row-major.
  void (*transform_points)(const double* rotation, const double* translation, PointsView in,
                           MutablePointsView out);
  /// min_i |q - p_i|^2, or +inf for an empty set.
  double (*min_squared_distance)(double qx, double qy, double qz, PointsView points);
  /// Piecewise collision penalty and its derivative with respect to distance.
  void (*collision_penalty)(const double* distance, std::size_t n, double eps, double* value,
                            double* slope);
};

const KernelTable& scalar_kernels();

/// nullptr when the variant is not compiled in or the CPU lacks support.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// Best available table. Setting PCGRASP_SIMD=scalar in the environment forces
/// the reference kernels.
const KernelTable& kernels();

std::string_view backend_name(Backend backend);

namespace detail {
// Definitions live in the per-ISA translation units.
extern const KernelTable kScalarTable;
const KernelTable* avx2_table_if_compiled();
const KernelTable* neon_table_if_compiled();
}  // namespace detail

}  // namespace pcgrasp::simd
