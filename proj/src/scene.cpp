#include "pcgrasp/scene.hpp"

#include "pcgrasp/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcgrasp {

bool DepthImage::valid(int u, int v) const {
  const double d = at(u, v);
  return std::isfinite(d) && d > 0.0;
}

void DepthImage::validate() const {
  if (width <= 0 || height <= 0) throw std::invalid_argument("depth image has no pixels");
  if (depth.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("depth buffer size does not match width x height");
  const auto& k = intrinsics;
  if (!(k.fx > 0.0) || !(k.fy > 0.0)) throw std::invalid_argument("focal lengths must be positive");
  if (!(k.cx >= 0.0 && k.cx < width && k.cy >= 0.0 && k.cy < height))
    throw std::invalid_argument("principal point outside the image");
}

PointCloud backproject(const DepthImage& image) {
  image.validate();
  const auto& k = image.intrinsics;
  PointCloud cloud;
  for (int v = 0; v < image.height; ++v) {
    for (int u = 0; u < image.width; ++u) {
      if (!image.valid(u, v)) continue;
      const double d = image.at(u, v);
      const Vec3 cam((u - k.cx) * d / k.fx, (v - k.cy) * d / k.fy, d);
      cloud.points.push_back(image.extrinsics.apply(cam));
    }
  }
  return cloud;
}

std::optional<PixelHit> project_to_pixel(const DepthImage& image, const Vec3& base_point) {
  const Vec3 cam = image.extrinsics.inverse().apply(base_point);
  if (!(cam.z() > 0.0)) return std::nullopt;
  const auto& k = image.intrinsics;
  const double u = k.fx * cam.x() / cam.z() + k.cx;
  const double v = k.fy * cam.y() / cam.z() + k.cy;
  const double ur = std::floor(u + 0.5), vr = std::floor(v + 0.5);
  if (!(ur >= 0.0 && ur < image.width && vr >= 0.0 && vr < image.height)) return std::nullopt;
  return PixelHit{static_cast<int>(ur), static_cast<int>(vr), cam.z()};
}

bool behind_surface(const DepthImage& image, const Vec3& base_point) {
  const auto hit = project_to_pixel(image, base_point);
  if (!hit || !image.valid(hit->u, hit->v)) return false;
  return hit->camera_depth > image.at(hit->u, hit->v);
}

SignedDistanceGrid::SignedDistanceGrid(const Vec3& origin, double resolution,
                                       std::array<int, 3> dims, std::vector<double> values,
                                       double margin)
    : origin_(origin), resolution_(resolution), dims_(dims), values_(std::move(values)), margin_(margin) {
  if (!(resolution > 0.0)) throw SceneError("grid resolution must be positive");
  for (int d : dims_)
    if (d <= 0) throw SceneError("grid dimensions must be positive");
  if (values_.size() != static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2])
    throw SceneError("grid value count does not match dimensions");
  for (double v : values_)
    if (!std::isfinite(v)) throw SceneError("grid contains a non-finite value");
  lattice_aligned_ = true;
  for (int a = 0; a < 3; ++a) {
    const double b = origin_[a] / resolution_;
    lattice_base_[a] = std::llround(b);
    if (static_cast<double>(lattice_base_[a]) * resolution_ != origin_[a]) lattice_aligned_ = false;
  }
}

Vec3 SignedDistanceGrid::vertex(int i, int j, int k) const {
  const std::array<int, 3> idx{i, j, k};
  Vec3 out;
  for (int a = 0; a < 3; ++a) {
    out[a] = lattice_aligned_ ? static_cast<double>(lattice_base_[a] + idx[a]) * resolution_
                              : origin_[a] + idx[a] * resolution_;
  }
  return out;
}

std::optional<std::array<int, 3>> SignedDistanceGrid::cell_of(const Vec3& p) const {
  std::array<int, 3> idx{};
  for (int a = 0; a < 3; ++a) {
    double c = lattice_aligned_ ? std::floor(p[a] / resolution_ + 0.5) - static_cast<double>(lattice_base_[a])
                                : std::floor((p[a] - origin_[a]) / resolution_ + 0.5);
    if (!(c >= 0.0 && c < dims_[a])) return std::nullopt;
    idx[a] = static_cast<int>(c);
  }
  return idx;
}

double SignedDistanceGrid::distance(const Vec3& p) const {
  const auto c = cell_of(p);
  if (!c) return kOutsideDistance;
  return value((*c)[0], (*c)[1], (*c)[2]);
}

Vec3 SignedDistanceGrid::gradient(const Vec3& p) const {
  const auto center = cell_of(p);
  if (!center) return Vec3::Zero();
  const double h = resolution_;
  Vec3 g = Vec3::Zero();
  for (int a = 0; a < 3; ++a) {
    Vec3 step = Vec3::Zero();
    step[a] = h;
    const bool has_plus = cell_of(p + step).has_value();
    const bool has_minus = cell_of(p - step).has_value();
    if (has_plus && has_minus)
      g[a] = (distance(p + step) - distance(p - step)) / (2.0 * h);
    else if (has_plus)
      g[a] = (distance(p + step) - distance(p)) / h;
    else if (has_minus)
      g[a] = (distance(p) - distance(p - step)) / h;
  }
  return g;
}

namespace {

/// Dense bucket grid over the cloud for exact nearest-neighbour queries.
class BucketIndex {
 public:
  BucketIndex(const std::vector<Vec3>& points, double cell) : cell_(cell) {
    lo_ = points.front();
    Vec3 hi = points.front();
    for (const auto& p : points) {
      lo_ = lo_.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    // Keep the bucket count bounded for sparse, wide clouds.
    const double extent = (hi - lo_).maxCoeff();
    cell_ = std::max(cell_, extent / 128.0);
    for (int a = 0; a < 3; ++a) n_[a] = static_cast<int>(std::floor((hi[a] - lo_[a]) / cell_)) + 1;
    const std::size_t buckets = static_cast<std::size_t>(n_[0]) * n_[1] * n_[2];
    start_.assign(buckets + 1, 0);
    std::vector<std::size_t> bucket_of(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      bucket_of[i] = flat(coord(points[i]));
      ++start_[bucket_of[i] + 1];
    }
    for (std::size_t b = 0; b < buckets; ++b) start_[b + 1] += start_[b];
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    x_.resize(points.size());
    y_.resize(points.size());
    z_.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::size_t slot = fill[bucket_of[i]]++;
      x_[slot] = points[i].x();
      y_[slot] = points[i].y();
      z_[slot] = points[i].z();
    }
  }

  double nearest_squared(const Vec3& q, const simd::KernelTable& k) const {
    std::array<int, 3> c;
    for (int a = 0; a < 3; ++a) c[a] = static_cast<int>(std::floor((q[a] - lo_[a]) / cell_));
    int r_first = 0, r_last = 0;
    for (int a = 0; a < 3; ++a) {
      r_first = std::max(r_first, std::max(-c[a], c[a] - (n_[a] - 1)));
      r_last = std::max(r_last, std::max(std::abs(c[a]), std::abs(c[a] - (n_[a] - 1))));
    }
    double best = std::numeric_limits<double>::infinity();
    for (int r = r_first; r <= r_last; ++r) {
      const int x0 = std::max(c[0] - r, 0), x1 = std::min(c[0] + r, n_[0] - 1);
      const int y0 = std::max(c[1] - r, 0), y1 = std::min(c[1] + r, n_[1] - 1);
      const int z0 = std::max(c[2] - r, 0), z1 = std::min(c[2] + r, n_[2] - 1);
      for (int ix = x0; ix <= x1; ++ix) {
        for (int iy = y0; iy <= y1; ++iy) {
          const bool shell_xy = std::abs(ix - c[0]) == r || std::abs(iy - c[1]) == r;
          if (shell_xy) {
            for (int iz = z0; iz <= z1; ++iz) scan(q, {ix, iy, iz}, k, best);
          } else {
            if (c[2] - r >= 0 && c[2] - r < n_[2]) scan(q, {ix, iy, c[2] - r}, k, best);
            if (r > 0 && c[2] + r >= 0 && c[2] + r < n_[2]) scan(q, {ix, iy, c[2] + r}, k, best);
          }
        }
      }
      // Any bucket in ring r + 1 is at least r full cells away from q.
      const double reach = r * cell_;
      if (best <= reach * reach) break;
    }
    return best;
  }

 private:
  std::array<int, 3> coord(const Vec3& p) const {
    std::array<int, 3> c;
    for (int a = 0; a < 3; ++a)
      c[a] = std::clamp(static_cast<int>(std::floor((p[a] - lo_[a]) / cell_)), 0, n_[a] - 1);
    return c;
  }
  std::size_t flat(const std::array<int, 3>& c) const {
    return (static_cast<std::size_t>(c[2]) * n_[1] + c[1]) * n_[0] + c[0];
  }
  void scan(const Vec3& q, const std::array<int, 3>& c, const simd::KernelTable& k, double& best) const {
    // Skip buckets that cannot beat the current best.
    double gap2 = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double lo = lo_[a] + c[a] * cell_, hi = lo + cell_;
      const double g = q[a] < lo ? lo - q[a] : (q[a] > hi ? q[a] - hi : 0.0);
      gap2 += g * g;
    }
    if (gap2 > best) return;
    const std::size_t b = flat(c), s = start_[b], e = start_[b + 1];
    if (s == e) return;
    const double d2 = k.min_squared_distance(q.x(), q.y(), q.z(),
                                             {x_.data() + s, y_.data() + s, z_.data() + s, e - s});
    if (d2 < best) best = d2;
  }

  double cell_;
  Vec3 lo_;
  std::array<int, 3> n_{};
  std::vector<std::size_t> start_;
  std::vector<double> x_, y_, z_;
};

}  // namespace

SignedDistanceGrid build_sdf(const PointCloud& cloud, double resolution, double margin) {
  if (cloud.points.empty()) throw SceneError("cannot build a distance field from an empty cloud");
  if (!(resolution > 0.0)) throw SceneError("resolution must be positive");
  if (!(margin >= 0.0)) throw SceneError("margin must be non-negative");
  Vec3 lo = cloud.points.front(), hi = cloud.points.front();
  for (const auto& p : cloud.points) {
    if (!p.allFinite()) throw SceneError("point cloud contains a non-finite coordinate");
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  std::array<long long, 3> base{};
  std::array<int, 3> dims{};
  for (int a = 0; a < 3; ++a) {
    base[a] = static_cast<long long>(std::floor((lo[a] - margin) / resolution));
    const auto top = static_cast<long long>(std::ceil((hi[a] + margin) / resolution));
    dims[a] = static_cast<int>(top - base[a] + 1);
  }
  const Vec3 origin(base[0] * resolution, base[1] * resolution, base[2] * resolution);

  const BucketIndex index(cloud.points, resolution);
  const auto& k = simd::kernels();
  const DepthImage* view = cloud.source.get();
  if (view) view->validate();

  std::vector<double> values(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]);
  for (int kz = 0; kz < dims[2]; ++kz) {
    for (int jy = 0; jy < dims[1]; ++jy) {
      for (int ix = 0; ix < dims[0]; ++ix) {
        const Vec3 v(static_cast<double>(base[0] + ix) * resolution,
                     static_cast<double>(base[1] + jy) * resolution,
                     static_cast<double>(base[2] + kz) * resolution);
        double d = std::sqrt(index.nearest_squared(v, k));
        if (view && behind_surface(*view, v)) d = -d;
        values[(static_cast<std::size_t>(kz) * dims[1] + jy) * dims[0] + ix] = d;
      }
    }
  }
  return SignedDistanceGrid(origin, resolution, dims, std::move(values), margin);
}

double collision_penalty(double d, double eps) {
  if (d < 0.0) return -d + 0.5 * eps;
  if (d <= eps) {
    const double t = d - eps;
    return (t * t) / (2.0 * eps);
  }
  return 0.0;
}

double collision_penalty_slope(double d, double eps) {
  if (d < 0.0) return -1.0;
  if (d <= eps) return (d - eps) / eps;
  return 0.0;
}

int count_negative_points(const DistanceField& field, std::span<const Vec3> points) {
  int n = 0;
  for (const auto& p : points)
    if (field.distance(p) < 0.0) ++n;
  return n;
}

CollisionVerdict check_trajectory_collision(const DistanceField& field, const KinematicChain& chain,
                                            const SurfacePointSet& points,
                                            const Eigen::MatrixXd& positions) {
  CollisionVerdict verdict;
  WorldPoints world;
  for (Eigen::Index t = 0; t < positions.rows(); ++t) {
    const JointConfig q = positions.row(t).transpose();
    transform_points(chain.compute_state(q), points, world);
    int negatives = 0;
    for (std::size_t i = 0; i < world.size(); ++i)
      if (field.distance(world.point(i)) < 0.0) ++negatives;
    if (negatives > verdict.worst_config_negative_count) {
      verdict.worst_config_negative_count = negatives;
      verdict.worst_config_index = static_cast<int>(t);
    }
  }
  verdict.in_collision = verdict.worst_config_negative_count >= kCollisionPointThreshold;
  return verdict;
}

CollisionVerdict check_trajectory_collision(const DistanceField& field, const KinematicChain& chain,
                                            const SurfacePointSet& points, const TrajectoryPlan& plan) {
  return check_trajectory_collision(field, chain, points, plan.positions);
}

}  // namespace pcgrasp
