#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <stdexcept>
#include <string>

namespace pcgrasp {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Rigid transform in SE(3): x -> rotation * x + translation.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Vec3& t) { return {Mat3::Identity(), t}; }
  static RigidTransform from_rotation(const Mat3& r) { return {r, Vec3::Zero()}; }

  /// URDF convention: fixed-axis roll about x, then pitch about y, then yaw about z.
  static RigidTransform from_xyz_rpy(const Vec3& xyz, const Vec3& rpy);

  /// Row-major 4x4 homogeneous matrix (16 values, last row ignored).
  static RigidTransform from_matrix16(const double* m);
  void to_matrix16(double* m) const;

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  RigidTransform operator*(const RigidTransform& o) const {
    return {rotation * o.rotation, rotation * o.translation + translation};
  }
  RigidTransform inverse() const {
    Mat3 rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }

  /// Largest deviation from R^T R = I and det(R) = 1.
  double orthonormality_error() const;
};

Mat3 rotation_x(double angle);
Mat3 rotation_y(double angle);
Mat3 rotation_z(double angle);
Mat3 axis_angle(const Vec3& unit_axis, double angle);

/// Geodesic angle between two rotations, in [0, pi].
double rotation_angle_between(const Mat3& a, const Mat3& b);

/// Projects a near-rotation matrix onto SO(3).
Mat3 orthonormalize(const Mat3& m);

class GeometryError : public std::runtime_error {
 public:
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pcgrasp
