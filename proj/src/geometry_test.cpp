#include "pcgrasp/geometry.hpp"

#include "doctest.h"

#include <random>

using namespace pcgrasp;

namespace {

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized().toRotationMatrix();
}

}  // namespace

TEST_CASE("rpy follows the fixed-axis x, y, z order") {
  const Vec3 rpy(0.3, -0.7, 1.1);
  const RigidTransform t = RigidTransform::from_xyz_rpy(Vec3(1, 2, 3), rpy);
  const Mat3 expected = (Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()) * Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
                         Eigen::AngleAxisd(rpy.x(), Vec3::UnitX()))
                            .toRotationMatrix();
  CHECK((t.rotation - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(t.translation == Vec3(1, 2, 3));
  CHECK(t.orthonormality_error() < 1e-12);
}

TEST_CASE("composition and inverse") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 50; ++i) {
    const RigidTransform a{random_rotation(rng), Vec3(u(rng), u(rng), u(rng))};
    const RigidTransform b{random_rotation(rng), Vec3(u(rng), u(rng), u(rng))};
    const Vec3 p(u(rng), u(rng), u(rng));
    CHECK(((a * b).apply(p) - a.apply(b.apply(p))).norm() < 1e-12);
    const RigidTransform e = a * a.inverse();
    CHECK((e.rotation - Mat3::Identity()).norm() < 1e-12);
    CHECK(e.translation.norm() < 1e-12);
  }
}

TEST_CASE("matrix16 round trip is row-major") {
  const RigidTransform t{rotation_z(0.4) * rotation_x(-1.2), Vec3(0.1, -0.2, 0.3)};
  double m[16];
  t.to_matrix16(m);
  CHECK(m[3] == 0.1);
  CHECK(m[7] == -0.2);
  CHECK(m[11] == 0.3);
  CHECK(m[15] == 1.0);
  CHECK(m[1] == t.rotation(0, 1));
  const RigidTransform back = RigidTransform::from_matrix16(m);
  CHECK(back.rotation == t.rotation);
  CHECK(back.translation == t.translation);
}

TEST_CASE("elementary rotations") {
  CHECK((rotation_z(M_PI / 2) * Vec3::UnitX() - Vec3::UnitY()).norm() < 1e-15);
  CHECK((rotation_x(M_PI / 2) * Vec3::UnitY() - Vec3::UnitZ()).norm() < 1e-15);
  CHECK((rotation_y(M_PI / 2) * Vec3::UnitZ() - Vec3::UnitX()).norm() < 1e-15);
  const Vec3 axis = Vec3(1, 2, -1).normalized();
  CHECK((axis_angle(axis, 0.8) - Eigen::AngleAxisd(0.8, axis).toRotationMatrix()).norm() < 1e-14);
}

TEST_CASE("geodesic angle lies in [0, pi]") {
  CHECK(rotation_angle_between(Mat3::Identity(), Mat3::Identity()) == doctest::Approx(0.0));
  CHECK(rotation_angle_between(Mat3::Identity(), rotation_z(0.3)) == doctest::Approx(0.3));
  CHECK(rotation_angle_between(rotation_x(M_PI), Mat3::Identity()) == doctest::Approx(M_PI));
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const double a = rotation_angle_between(random_rotation(rng), random_rotation(rng));
    CHECK(a >= 0.0);
    CHECK(a <= M_PI);
  }
}

TEST_CASE("orthonormalize returns a proper rotation") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1e-4);
  const Mat3 r = random_rotation(rng);
  Mat3 noisy = r;
  for (int i = 0; i < 9; ++i) noisy.data()[i] += n(rng);
  const Mat3 fixed = orthonormalize(noisy);
  CHECK((fixed.transpose() * fixed - Mat3::Identity()).norm() < 1e-12);
  CHECK(fixed.determinant() == doctest::Approx(1.0));
  CHECK((fixed - r).norm() < 1e-3);
}
