#pragma once

#include "pcgrasp/scene.hpp"

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace pcgrasp::testing {

/// Central differences of a scalar function.
Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                 double step = 1e-6);

/// |a - b|_inf / max(|a|_inf, |b|_inf, floor)
double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor = 1e-6);

/// Linear scan over all points.
double brute_nearest_distance(const std::vector<Vec3>& cloud, const Vec3& p);

/// Sign by projecting p into the depth image by hand: negative when p lands
/// on a valid pixel whose depth is smaller than p's camera depth.
bool brute_behind(const DepthImage& depth, const Vec3& p);

/// Hand-written piecewise penalty.
double reference_penalty(double d, double eps);

/// Smooth field: distance to a sphere surface, negative inside.
class SphereField final : public DistanceField {
 public:
  SphereField(const Vec3& centre, double radius) : centre_(centre), radius_(radius) {}
  double distance(const Vec3& p) const override { return (p - centre_).norm() - radius_; }
  Vec3 gradient(const Vec3& p) const override { return (p - centre_).normalized(); }

 private:
  Vec3 centre_;
  double radius_;
};

/// Constant field: every point at the same distance, zero gradient.
class ConstantField final : public DistanceField {
 public:
  explicit ConstantField(double d) : d_(d) {}
  double distance(const Vec3&) const override { return d_; }
  Vec3 gradient(const Vec3&) const override { return Vec3::Zero(); }

 private:
  double d_;
};

}  // namespace pcgrasp::testing
