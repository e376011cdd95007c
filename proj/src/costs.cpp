#include "pcgrasp/costs.hpp"

#include "pcgrasp/simd/kernels.hpp"

#include "json.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace pcgrasp {

namespace {

Eigen::Quaterniond unit_quaternion(const Mat3& r) { return Eigen::Quaterniond(r).normalized(); }

/// Columns map Euler rates (a, b, c) to world angular velocity for R = Rx Ry Rz.
Mat3 euler_rate_matrix(const Vec3& e) {
  Mat3 m;
  const Mat3 rx = rotation_x(e.x());
  m.col(0) = Vec3::UnitX();
  m.col(1) = rx * Vec3::UnitY();
  m.col(2) = rx * rotation_y(e.y()) * Vec3::UnitZ();
  return m;
}

}  // namespace

GoalSet read_goal_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read goal file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("goal file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_array()) throw std::runtime_error("goal file must hold a JSON array");
  GoalSet goals;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("pose") || !item["pose"].is_array() || item["pose"].size() != 16)
      throw std::runtime_error("each goal needs a 16-element \"pose\" array");
    double m[16];
    for (int i = 0; i < 16; ++i) m[i] = item["pose"][i].get<double>();
    RigidTransform t = RigidTransform::from_matrix16(m);
    if (!t.translation.allFinite() || t.orthonormality_error() > 1e-6)
      throw std::runtime_error("goal " + std::to_string(goals.size()) + " is not a rigid transform");
    t.rotation = orthonormalize(t.rotation);
    goals.push_back(t);
  }
  return goals;
}

void write_goal_set(const std::filesystem::path& path, const GoalSet& goals) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& g : goals) {
    double m[16];
    g.to_matrix16(m);
    doc.push_back({{"pose", std::vector<double>(m, m + 16)}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write goal file " + path.string());
  out << doc.dump(1) << '\n';
}

std::string_view goal_cost_name(GoalCostKind kind) {
  switch (kind) {
    case GoalCostKind::point_matching: return "pm";
    case GoalCostKind::quaternion: return "quat";
    case GoalCostKind::euler: return "euler";
  }
  return "?";
}

GoalCostKind parse_goal_cost_kind(std::string_view name) {
  if (name == "pm" || name == "point_matching") return GoalCostKind::point_matching;
  if (name == "quat" || name == "quaternion") return GoalCostKind::quaternion;
  if (name == "euler") return GoalCostKind::euler;
  throw std::invalid_argument("unknown goal cost '" + std::string(name) + "'");
}

RigidTransform standoff_pose(const RigidTransform& goal, double offset, const Vec3& approach_axis) {
  return goal * RigidTransform::from_translation(-offset * approach_axis.normalized());
}

double goal_cost(const RigidTransform& pose, const RigidTransform& goal, const GripperPointSet& gripper) {
  double sum = 0.0;
  for (const Vec3& x : gripper.points) sum += (pose.apply(x) - goal.apply(x)).squaredNorm();
  return sum;
}

double goal_cost_quaternion(const RigidTransform& pose, const RigidTransform& goal) {
  const double s = unit_quaternion(pose.rotation).dot(unit_quaternion(goal.rotation));
  return (pose.translation - goal.translation).squaredNorm() + 1.0 - s * s;
}

Vec3 euler_xyz(const Mat3& r) {
  const double a = std::atan2(-r(1, 2), r(2, 2));
  const double b = std::asin(std::clamp(r(0, 2), -1.0, 1.0));
  const double c = std::atan2(-r(0, 1), r(0, 0));
  return {a, b, c};
}

double goal_cost_euler(const RigidTransform& pose, const RigidTransform& goal) {
  return (pose.translation - goal.translation).squaredNorm() +
         (euler_xyz(pose.rotation) - euler_xyz(goal.rotation)).squaredNorm();
}

double goal_cost(GoalCostKind kind, const RigidTransform& pose, const RigidTransform& goal,
                 const GripperPointSet& gripper) {
  switch (kind) {
    case GoalCostKind::point_matching: return goal_cost(pose, goal, gripper);
    case GoalCostKind::quaternion: return goal_cost_quaternion(pose, goal);
    case GoalCostKind::euler: return goal_cost_euler(pose, goal);
  }
  return 0.0;
}

double tool_goal_cost(GoalCostKind kind, const KinematicChain& chain, const FkState& state,
                      const RigidTransform& goal, const GripperPointSet& gripper,
                      Eigen::Ref<Eigen::VectorXd> grad, double weight) {
  const RigidTransform& pose = chain.tool_pose(state);
  std::vector<LinkWrench> wrenches(chain.links().size());
  LinkWrench& w = wrenches[chain.tool_index()];
  double cost = 0.0;
  if (kind == GoalCostKind::point_matching) {
    for (const Vec3& x : gripper.points) {
      const Vec3 p = pose.apply(x);
      const Vec3 r = p - goal.apply(x);
      cost += r.squaredNorm();
      w.add(p, (2.0 * weight) * r);
    }
  } else {
    const Vec3 dt = pose.translation - goal.translation;
    cost = dt.squaredNorm();
    w.add(pose.translation, (2.0 * weight) * dt);
    // Rotational part: d(cost)/d(world rotation vector), applied as a pure moment.
    Vec3 torque;
    if (kind == GoalCostKind::quaternion) {
      const Eigen::Quaterniond qt = unit_quaternion(pose.rotation);
      const Eigen::Quaterniond qg = unit_quaternion(goal.rotation);
      const double s = qt.dot(qg);
      cost += 1.0 - s * s;
      const Vec3 ds = 0.5 * (qt.w() * qg.vec() - qg.w() * qt.vec() + qt.vec().cross(qg.vec()));
      torque = -2.0 * s * ds;
    } else {
      const Vec3 et = euler_xyz(pose.rotation);
      const Vec3 de = et - euler_xyz(goal.rotation);
      cost += de.squaredNorm();
      const Mat3 rates = euler_rate_matrix(et);
      // Near gimbal lock the rate matrix is singular; fall back to a pseudo-inverse.
      Mat3 inv;
      if (std::abs(rates.determinant()) > 1e-9) {
        inv = rates.inverse();
      } else {
        Eigen::JacobiSVD<Mat3> svd(rates, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Vec3 sv = svd.singularValues();
        for (int i = 0; i < 3; ++i) sv[i] = sv[i] > 1e-9 ? 1.0 / sv[i] : 0.0;
        inv = svd.matrixV() * sv.asDiagonal() * svd.matrixU().transpose();
      }
      torque = inv.transpose() * (2.0 * de);
    }
    w.moment += weight * torque;
  }
  if (grad.size() > 0) chain.accumulate_gradient(state, wrenches, grad);
  return cost;
}

Eigen::VectorXd goal_cost_gradient(const KinematicChain& chain, const JointConfig& q,
                                   const RigidTransform& goal, const GripperPointSet& gripper,
                                   GoalCostKind kind) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(chain.dof());
  tool_goal_cost(kind, chain, chain.compute_state(q), goal, gripper, grad);
  return grad;
}

double config_collision_cost(const DistanceField& field, const KinematicChain& chain,
                             const FkState& state, const SurfacePointSet& points, double eps,
                             CollisionWorkspace& ws, Eigen::Ref<Eigen::VectorXd> grad, double weight) {
  transform_points(state, points, ws.world);
  const std::size_t m = ws.world.size();
  ws.distance.resize(m);
  ws.value.resize(m);
  ws.slope.resize(m);
  for (std::size_t i = 0; i < m; ++i) ws.distance[i] = field.distance(ws.world.point(i));
  simd::kernels().collision_penalty(ws.distance.data(), m, eps, ws.value.data(), ws.slope.data());
  double cost = 0.0;
  for (std::size_t i = 0; i < m; ++i) cost += ws.value[i];

  if (grad.size() > 0 && cost > 0.0) {
    ws.wrenches.assign(chain.links().size(), LinkWrench{});
    bool any = false;
    for (std::size_t li = 0; li < points.links.size(); ++li) {
      for (std::size_t i = ws.world.link_offset[li]; i < ws.world.link_offset[li + 1]; ++i) {
        if (ws.slope[i] == 0.0) continue;
        const Vec3 p = ws.world.point(i);
        ws.wrenches[points.links[li].link_index].add(p, (weight * ws.slope[i]) * field.gradient(p));
        any = true;
      }
    }
    if (any) chain.accumulate_gradient(state, ws.wrenches, grad);
  }
  return cost;
}

double config_collision_cost(const DistanceField& field, const KinematicChain& chain,
                             const SurfacePointSet& points, const JointConfig& q, double eps) {
  CollisionWorkspace ws;
  Eigen::VectorXd none;
  return config_collision_cost(field, chain, chain.compute_state(q), points, eps, ws, none);
}

Eigen::VectorXd config_collision_gradient(const DistanceField& field, const KinematicChain& chain,
                                          const SurfacePointSet& points, const JointConfig& q, double eps) {
  CollisionWorkspace ws;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(chain.dof());
  config_collision_cost(field, chain, chain.compute_state(q), points, eps, ws, grad);
  return grad;
}

double velocity_cost(const Eigen::MatrixXd& velocities) { return velocities.squaredNorm(); }

}  // namespace pcgrasp
