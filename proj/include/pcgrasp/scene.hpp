#pragma once

#include "pcgrasp/geometry.hpp"
#include "pcgrasp/robot_model.hpp"
#include "pcgrasp/trajectory.hpp"

#include <Eigen/Core>

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace pcgrasp {

struct CameraIntrinsics {
  double fx = 0.0, fy = 0.0, cx = 0.0, cy = 0.0;
};

/// Row-major depth in meters; 0 or NaN marks an invalid pixel.
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<double> depth;
  CameraIntrinsics intrinsics;
  RigidTransform extrinsics;  // camera frame -> robot base frame

  double at(int u, int v) const { return depth[static_cast<std::size_t>(v) * width + u]; }
  bool valid(int u, int v) const;
  /// Throws std::invalid_argument on bad intrinsics or size.
  void validate() const;
};

struct PointCloud {
  std::vector<Vec3> points;
  /// Viewpoint used to decide which grid vertices lie behind the surface.
  std::shared_ptr<const DepthImage> source;
};

/// Each valid pixel (u, v, d) -> ((u - cx) d / fx, (v - cy) d / fy, d) in the
/// camera frame, then through the extrinsics.
PointCloud backproject(const DepthImage& depth);

struct PixelHit {
  int u = 0;
  int v = 0;
  double camera_depth = 0.0;  // z of the point in the camera frame
};

/// Nearest pixel of a base-frame point, or nullopt when it is behind the camera
/// or outside the image.
std::optional<PixelHit> project_to_pixel(const DepthImage& depth, const Vec3& base_point);

/// True when the point projects onto a valid pixel whose depth is smaller than
/// the point's own camera depth.
bool behind_surface(const DepthImage& depth, const Vec3& base_point);

/// Anything that can report a signed distance and its spatial gradient.
class DistanceField {
 public:
  virtual ~DistanceField() = default;
  virtual double distance(const Vec3& p) const = 0;
  virtual Vec3 gradient(const Vec3& p) const = 0;
};

/// Signed distances stored on the vertices of a regular grid. Vertex (i, j, k)
/// sits at origin + resolution * (i, j, k); storage is x-fastest.
class SignedDistanceGrid final : public DistanceField {
 public:
  static constexpr double kOutsideDistance = 1.0e4;

  SignedDistanceGrid(const Vec3& origin, double resolution, std::array<int, 3> dims,
                     std::vector<double> values, double margin = 0.0);

  const Vec3& origin() const { return origin_; }
  double resolution() const { return resolution_; }
  const std::array<int, 3>& dims() const { return dims_; }
  double margin() const { return margin_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t vertex_count() const { return values_.size(); }

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * dims_[1] + j) * dims_[0] + i;
  }
  double value(int i, int j, int k) const { return values_[index(i, j, k)]; }
  Vec3 vertex(int i, int j, int k) const;

  /// Vertex whose cell contains p, or nullopt outside the grid.
  std::optional<std::array<int, 3>> cell_of(const Vec3& p) const;

  /// Stored value of the containing cell; kOutsideDistance outside the grid.
  double distance(const Vec3& p) const override;
  /// Central difference of distance() with step = resolution, one-sided at
  /// the grid boundary, zero outside.
  Vec3 gradient(const Vec3& p) const override;

 private:
  Vec3 origin_;
  double resolution_;
  std::array<int, 3> dims_;
  std::vector<double> values_;
  double margin_;
  bool lattice_aligned_ = false;
  std::array<long long, 3> lattice_base_{};
};

class SceneError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid over the cloud's bounding box grown by margin, vertices on multiples of
/// resolution. |value| is the exact distance to the nearest cloud point; the
/// sign is negative behind the surface seen in cloud.source (all positive
/// when the cloud has no source image).
SignedDistanceGrid build_sdf(const PointCloud& cloud, double resolution = 0.05, double margin = 0.3);

inline double query_sdf(const SignedDistanceGrid& grid, const Vec3& p) { return grid.distance(p); }

/// Hinge-quadratic proximity penalty: -d + eps/2 inside, (d - eps)^2 / (2 eps)
/// within the margin, 0 beyond it.
double collision_penalty(double d, double eps);
double collision_penalty_slope(double d, double eps);

inline constexpr int kCollisionPointThreshold = 5;

struct CollisionVerdict {
  bool in_collision = false;
  int worst_config_negative_count = 0;
  int worst_config_index = -1;
};

int count_negative_points(const DistanceField& field, std::span<const Vec3> points);

/// A configuration collides when at least kCollisionPointThreshold robot
/// surface points have negative signed distance.
CollisionVerdict check_trajectory_collision(const DistanceField& field, const KinematicChain& chain,
                                            const SurfacePointSet& points,
                                            const Eigen::MatrixXd& positions);
CollisionVerdict check_trajectory_collision(const DistanceField& field, const KinematicChain& chain,
                                            const SurfacePointSet& points,
                                            const TrajectoryPlan& plan);

}  // namespace pcgrasp
