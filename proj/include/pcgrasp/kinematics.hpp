#pragma once

#include "pcgrasp/geometry.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pcgrasp {

using JointConfig = Eigen::VectorXd;

enum class JointKind { revolute, continuous, prismatic, fixed };

struct JointLimits {
  double lower = 0.0;
  double upper = 0.0;
};

struct JointSpec {
  std::string name;
  JointKind kind = JointKind::fixed;
  std::string parent;
  std::string child;
  Vec3 axis = Vec3::UnitX();
  RigidTransform origin;  // parent link frame -> joint frame
  std::optional<JointLimits> limits;
  double velocity_limit = 0.0;
};

struct MeshRef {
  std::string filename;  // as written in the URDF
  std::filesystem::path resolved;
  RigidTransform origin;  // link frame -> mesh frame
  Vec3 scale = Vec3::Ones();
};

struct LinkSpec {
  std::string name;
  std::vector<MeshRef> meshes;
};

class UrdfError : public std::runtime_error {
 public:
  enum class Code { malformed, unknown_link, disconnected_tool, unsupported_joint, invalid };
  UrdfError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Force and moment (about the world origin) applied to one link by a set of
/// point forces. Used to pull point-wise gradients back to joint space.
struct LinkWrench {
  Vec3 force = Vec3::Zero();
  Vec3 moment = Vec3::Zero();
  void add(const Vec3& world_point, const Vec3& f) {
    force += f;
    moment += world_point.cross(f);
  }
};

/// Link poses plus the world-frame screw axes of each actuated joint.
struct FkState {
  std::vector<RigidTransform> link_poses;  // indexed like KinematicChain::links()
  std::vector<Vec3> joint_axis;            // per dof, world frame
  std::vector<Vec3> joint_origin;          // per dof, world frame
};

class KinematicChain;

class LinkPoses {
 public:
  LinkPoses(const KinematicChain* chain, std::vector<RigidTransform> poses)
      : chain_(chain), poses_(std::move(poses)) {}
  const RigidTransform& at(std::string_view link) const;
  const RigidTransform& operator[](std::size_t link_index) const { return poses_[link_index]; }
  std::size_t size() const { return poses_.size(); }
  std::map<std::string, RigidTransform> to_map() const;

 private:
  const KinematicChain* chain_;
  std::vector<RigidTransform> poses_;
};

/// Fixed-base tree of links rooted at base_link. The actuated variables are the
/// non-fixed joints on the path from base_link to tool_link, ordered from the
/// base outward. Movable joints off that path stay at their rest position.
class KinematicChain {
 public:
  const std::vector<LinkSpec>& links() const { return links_; }
  const std::vector<JointSpec>& joints() const { return joints_; }
  const std::string& base_link() const { return links_.front().name; }
  const std::string& tool_link() const { return links_[tool_index_].name; }
  std::size_t tool_index() const { return tool_index_; }
  int dof() const { return static_cast<int>(actuated_.size()); }

  std::optional<std::size_t> link_index(std::string_view name) const;
  std::size_t require_link(std::string_view name) const;

  /// Index into joints() of the joint driven by variable i.
  std::size_t actuated_joint(int i) const { return actuated_[i]; }
  const JointSpec& actuated_spec(int i) const { return joints_[actuated_[i]]; }
  /// Variables whose motion moves the given link.
  const std::vector<int>& variables_moving(std::size_t link_index) const {
    return link_vars_[link_index];
  }

  Eigen::VectorXd lower_limits() const;
  Eigen::VectorXd upper_limits() const;
  Eigen::VectorXd velocity_limits() const;
  /// Componentwise midpoint of the position limits.
  JointConfig mid_configuration() const;
  JointConfig clamp(const JointConfig& q) const;
  bool within_limits(const JointConfig& q, double tol = 0.0) const;

  LinkPoses forward_kinematics(const JointConfig& q) const;
  FkState compute_state(const JointConfig& q) const;
  const RigidTransform& tool_pose(const FkState& s) const { return s.link_poses[tool_index_]; }

  /// d(world position of p_local attached to link) / dq, 3 x dof.
  Eigen::Matrix3Xd point_jacobian(const JointConfig& q, std::string_view link,
                                  const Vec3& p_local) const;
  Eigen::Matrix3Xd point_jacobian(const FkState& state, std::size_t link_index,
                                  const Vec3& world_point) const;

  /// Adds J^T f for all point forces summarized by per-link wrenches into grad.
  void accumulate_gradient(const FkState& state, const std::vector<LinkWrench>& wrenches,
                           Eigen::Ref<Eigen::VectorXd> grad) const;

 private:
  friend KinematicChain parse_urdf(std::string_view, std::string_view, std::string_view,
                                   const std::filesystem::path&);
  void check_config(const JointConfig& q) const;

  std::vector<LinkSpec> links_;              // topological order, base first
  std::vector<JointSpec> joints_;            // topological order
  std::vector<std::size_t> joint_parent_;    // link index of each joint's parent
  std::vector<std::size_t> joint_child_;     // link index of each joint's child
  std::vector<int> joint_variable_;          // -1 unless actuated
  std::vector<double> joint_rest_;           // value used for non-actuated movable joints
  std::vector<std::size_t> actuated_;
  std::vector<std::vector<int>> link_vars_;
  std::size_t tool_index_ = 0;
};

/// Parses the supported URDF subset. Relative mesh paths resolve against mesh_root.
KinematicChain parse_urdf(std::string_view urdf_text, std::string_view base_link,
                          std::string_view tool_link, const std::filesystem::path& mesh_root = {});

/// Reads a URDF file; mesh paths resolve against the file's directory.
KinematicChain load_urdf(const std::filesystem::path& path, std::string_view base_link,
                         std::string_view tool_link);

/// Root link and (if unique) leaf link of a URDF's link tree, for CLI defaults.
struct UrdfEndpoints {
  std::string root;
  std::optional<std::string> unique_leaf;
};
UrdfEndpoints urdf_endpoints(std::string_view urdf_text);

}  // namespace pcgrasp
