#include "pcgrasp/geometry.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace pcgrasp {

Mat3 rotation_x(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << 1, 0, 0, 0, c, -s, 0, s, c;
  return r;
}

Mat3 rotation_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << c, 0, s, 0, 1, 0, -s, 0, c;
  return r;
}

Mat3 rotation_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 r;
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

Mat3 axis_angle(const Vec3& unit_axis, double angle) {
  return Eigen::AngleAxisd(angle, unit_axis).toRotationMatrix();
}

RigidTransform RigidTransform::from_xyz_rpy(const Vec3& xyz, const Vec3& rpy) {
  return {rotation_z(rpy.z()) * rotation_y(rpy.y()) * rotation_x(rpy.x()), xyz};
}

RigidTransform RigidTransform::from_matrix16(const double* m) {
  RigidTransform out;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out.rotation(r, c) = m[4 * r + c];
    out.translation(r) = m[4 * r + 3];
  }
  return out;
}

void RigidTransform::to_matrix16(double* m) const {
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m[4 * r + c] = rotation(r, c);
    m[4 * r + 3] = translation(r);
  }
  m[12] = m[13] = m[14] = 0.0;
  m[15] = 1.0;
}

double RigidTransform::orthonormality_error() const {
  const double ortho = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  return std::max(ortho, std::abs(rotation.determinant() - 1.0));
}

double rotation_angle_between(const Mat3& a, const Mat3& b) {
  const double c = std::clamp(((a * b.transpose()).trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

Mat3 orthonormalize(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0) {
    Mat3 u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

}  // namespace pcgrasp
