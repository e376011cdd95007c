#include "pcgrasp/kinematics.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_map>

namespace pcgrasp {

namespace pt = boost::property_tree;

namespace {

constexpr double kContinuousLimit = 2.0 * std::numbers::pi;

Vec3 parse_vec3(const std::string& text, const Vec3& fallback) {
  if (text.empty()) return fallback;
  std::istringstream in(text);
  Vec3 v;
  if (!(in >> v.x() >> v.y() >> v.z()))
    throw UrdfError(UrdfError::Code::invalid, "expected three numbers, got '" + text + "'");
  return v;
}

std::string attr(const pt::ptree& node, const char* name, const std::string& fallback = {}) {
  return node.get<std::string>(std::string("<xmlattr>.") + name, fallback);
}

RigidTransform parse_origin(const pt::ptree& parent) {
  auto origin = parent.get_child_optional("origin");
  if (!origin) return RigidTransform::identity();
  return RigidTransform::from_xyz_rpy(parse_vec3(attr(*origin, "xyz"), Vec3::Zero()),
                                      parse_vec3(attr(*origin, "rpy"), Vec3::Zero()));
}

std::filesystem::path resolve_mesh_path(const std::string& filename,
                                        const std::filesystem::path& root) {
  std::string rel = filename;
  bool package = false;
  if (rel.rfind("file://", 0) == 0) rel = rel.substr(7);
  if (rel.rfind("package://", 0) == 0) {
    rel = rel.substr(10);
    package = true;
  }
  std::filesystem::path p(rel);
  if (p.is_absolute()) return p;
  std::vector<std::filesystem::path> candidates{root / p};
  if (package) {
    // package://<pkg>/<rest>: try <rest> relative to the URDF, then the parent directory.
    auto it = p.begin();
    std::filesystem::path rest;
    for (++it; it != p.end(); ++it) rest /= *it;
    candidates.push_back(root / rest);
    candidates.push_back(root.parent_path() / p);
  }
  for (const auto& c : candidates)
    if (std::filesystem::exists(c)) return c;
  return candidates.front();
}

void collect_meshes(const pt::ptree& link, const char* tag, const std::filesystem::path& root,
                    std::vector<MeshRef>& out) {
  for (const auto& [key, child] : link) {
    if (key != tag) continue;
    auto mesh = child.get_child_optional("geometry.mesh");
    if (!mesh) continue;
    MeshRef ref;
    ref.filename = attr(*mesh, "filename");
    if (ref.filename.empty()) continue;
    ref.resolved = resolve_mesh_path(ref.filename, root);
    ref.origin = parse_origin(child);
    ref.scale = parse_vec3(attr(*mesh, "scale"), Vec3::Ones());
    out.push_back(std::move(ref));
  }
}

JointKind parse_kind(const std::string& type, const std::string& joint_name) {
  if (type == "revolute") return JointKind::revolute;
  if (type == "continuous") return JointKind::continuous;
  if (type == "prismatic") return JointKind::prismatic;
  if (type == "fixed") return JointKind::fixed;
  if (type == "planar" || type == "floating")
    throw UrdfError(UrdfError::Code::unsupported_joint,
                    "joint '" + joint_name + "': unsupported joint type '" + type + "'");
  throw UrdfError(UrdfError::Code::invalid,
                  "joint '" + joint_name + "': unknown joint type '" + type + "'");
}

pt::ptree read_robot(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw UrdfError(UrdfError::Code::malformed, std::string("malformed URDF XML: ") + e.what());
  }
  auto robot = tree.get_child_optional("robot");
  if (!robot) throw UrdfError(UrdfError::Code::malformed, "URDF has no <robot> element");
  return *robot;
}

struct RawModel {
  std::vector<LinkSpec> links;
  std::vector<JointSpec> joints;
};

RawModel read_model(std::string_view text, const std::filesystem::path& mesh_root) {
  const pt::ptree robot = read_robot(text);
  RawModel model;
  std::set<std::string> link_names;
  for (const auto& [key, node] : robot) {
    if (key == "link") {
      LinkSpec link;
      link.name = attr(node, "name");
      if (link.name.empty()) throw UrdfError(UrdfError::Code::invalid, "link without a name");
      if (!link_names.insert(link.name).second)
        throw UrdfError(UrdfError::Code::invalid, "duplicate link '" + link.name + "'");
      collect_meshes(node, "visual", mesh_root, link.meshes);
      if (link.meshes.empty()) collect_meshes(node, "collision", mesh_root, link.meshes);
      model.links.push_back(std::move(link));
    } else if (key == "joint") {
      JointSpec j;
      j.name = attr(node, "name");
      j.kind = parse_kind(attr(node, "type"), j.name);
      j.parent = node.get<std::string>("parent.<xmlattr>.link", "");
      j.child = node.get<std::string>("child.<xmlattr>.link", "");
      if (j.parent.empty() || j.child.empty())
        throw UrdfError(UrdfError::Code::invalid, "joint '" + j.name + "' lacks parent or child");
      j.origin = parse_origin(node);
      if (auto axis = node.get_child_optional("axis"))
        j.axis = parse_vec3(attr(*axis, "xyz"), Vec3::UnitX());
      const double norm = j.axis.norm();
      if (!(norm > 1e-12))
        throw UrdfError(UrdfError::Code::invalid, "joint '" + j.name + "' has a zero axis");
      j.axis /= norm;
      if (auto limit = node.get_child_optional("limit")) {
        j.velocity_limit = limit->get<double>("<xmlattr>.velocity", 0.0);
        if (j.kind == JointKind::revolute || j.kind == JointKind::prismatic) {
          j.limits = JointLimits{limit->get<double>("<xmlattr>.lower", 0.0),
                                 limit->get<double>("<xmlattr>.upper", 0.0)};
        }
      }
      if (j.kind == JointKind::continuous) j.limits = JointLimits{-kContinuousLimit, kContinuousLimit};
      if ((j.kind == JointKind::revolute || j.kind == JointKind::prismatic) && !j.limits)
        throw UrdfError(UrdfError::Code::invalid, "joint '" + j.name + "' requires <limit>");
      if (j.limits && j.limits->lower > j.limits->upper)
        throw UrdfError(UrdfError::Code::invalid, "joint '" + j.name + "' has lower > upper");
      if (j.velocity_limit < 0.0)
        throw UrdfError(UrdfError::Code::invalid, "joint '" + j.name + "' has negative velocity");
      model.joints.push_back(std::move(j));
    }
  }
  return model;
}

}  // namespace

const RigidTransform& LinkPoses::at(std::string_view link) const {
  return poses_[chain_->require_link(link)];
}

std::map<std::string, RigidTransform> LinkPoses::to_map() const {
  std::map<std::string, RigidTransform> out;
  for (std::size_t i = 0; i < poses_.size(); ++i) out.emplace(chain_->links()[i].name, poses_[i]);
  return out;
}

KinematicChain parse_urdf(std::string_view urdf_text, std::string_view base_link,
                          std::string_view tool_link, const std::filesystem::path& mesh_root) {
  RawModel model = read_model(urdf_text, mesh_root);

  std::unordered_map<std::string, std::size_t> raw_link;
  for (std::size_t i = 0; i < model.links.size(); ++i) raw_link.emplace(model.links[i].name, i);
  if (!raw_link.count(std::string(base_link)))
    throw UrdfError(UrdfError::Code::unknown_link, "base link '" + std::string(base_link) + "' not found");
  if (!raw_link.count(std::string(tool_link)))
    throw UrdfError(UrdfError::Code::disconnected_tool,
                    "tool link '" + std::string(tool_link) + "' not found in URDF");

  std::unordered_map<std::string, std::vector<std::size_t>> children;  // link -> joint indices
  std::set<std::string> has_parent;
  for (std::size_t j = 0; j < model.joints.size(); ++j) {
    const auto& js = model.joints[j];
    if (!raw_link.count(js.parent) || !raw_link.count(js.child))
      throw UrdfError(UrdfError::Code::unknown_link, "joint '" + js.name + "' references an unknown link");
    if (!has_parent.insert(js.child).second)
      throw UrdfError(UrdfError::Code::invalid, "link '" + js.child + "' has more than one parent");
    children[js.parent].push_back(j);
  }

  KinematicChain chain;
  std::unordered_map<std::string, std::size_t> index;
  chain.links_.push_back(model.links[raw_link.at(std::string(base_link))]);
  index.emplace(chain.links_.back().name, 0);
  for (std::size_t cursor = 0; cursor < chain.links_.size(); ++cursor) {
    const std::string parent = chain.links_[cursor].name;
    auto it = children.find(parent);
    if (it == children.end()) continue;
    for (std::size_t j : it->second) {
      const auto& js = model.joints[j];
      if (index.count(js.child))
        throw UrdfError(UrdfError::Code::invalid, "kinematic loop at link '" + js.child + "'");
      index.emplace(js.child, chain.links_.size());
      chain.links_.push_back(model.links[raw_link.at(js.child)]);
      chain.joints_.push_back(js);
      chain.joint_parent_.push_back(cursor);
      chain.joint_child_.push_back(chain.links_.size() - 1);
    }
  }

  auto tool = index.find(std::string(tool_link));
  if (tool == index.end())
    throw UrdfError(UrdfError::Code::disconnected_tool, "tool link '" + std::string(tool_link) +
                                                            "' is not reachable from base link '" +
                                                            std::string(base_link) + "'");
  chain.tool_index_ = tool->second;

  // Joint entering each link (links after the base have exactly one).
  std::vector<int> parent_joint(chain.links_.size(), -1);
  for (std::size_t j = 0; j < chain.joints_.size(); ++j)
    parent_joint[chain.joint_child_[j]] = static_cast<int>(j);

  std::vector<std::size_t> path;  // joints from tool back to base
  for (std::size_t l = chain.tool_index_; parent_joint[l] >= 0; l = chain.joint_parent_[parent_joint[l]])
    path.push_back(static_cast<std::size_t>(parent_joint[l]));

  chain.joint_variable_.assign(chain.joints_.size(), -1);
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    if (chain.joints_[*it].kind == JointKind::fixed) continue;
    chain.joint_variable_[*it] = static_cast<int>(chain.actuated_.size());
    chain.actuated_.push_back(*it);
  }

  chain.joint_rest_.assign(chain.joints_.size(), 0.0);
  for (std::size_t j = 0; j < chain.joints_.size(); ++j) {
    if (const auto& lim = chain.joints_[j].limits)
      chain.joint_rest_[j] = std::clamp(0.0, lim->lower, lim->upper);
  }

  chain.link_vars_.assign(chain.links_.size(), {});
  for (std::size_t j = 0; j < chain.joints_.size(); ++j) {
    auto vars = chain.link_vars_[chain.joint_parent_[j]];
    if (chain.joint_variable_[j] >= 0) vars.push_back(chain.joint_variable_[j]);
    chain.link_vars_[chain.joint_child_[j]] = std::move(vars);
  }
  return chain;
}

KinematicChain load_urdf(const std::filesystem::path& path, std::string_view base_link,
                         std::string_view tool_link) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read URDF file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_urdf(buffer.str(), base_link, tool_link, path.parent_path());
}

UrdfEndpoints urdf_endpoints(std::string_view urdf_text) {
  RawModel model = read_model(urdf_text, {});
  std::set<std::string> parents, children;
  for (const auto& j : model.joints) {
    parents.insert(j.parent);
    children.insert(j.child);
  }
  UrdfEndpoints out;
  std::vector<std::string> leaves;
  for (const auto& l : model.links) {
    if (!children.count(l.name) && out.root.empty()) out.root = l.name;
    if (!parents.count(l.name)) leaves.push_back(l.name);
  }
  if (out.root.empty()) throw UrdfError(UrdfError::Code::invalid, "URDF has no root link");
  if (leaves.size() == 1) out.unique_leaf = leaves.front();
  return out;
}

std::optional<std::size_t> KinematicChain::link_index(std::string_view name) const {
  for (std::size_t i = 0; i < links_.size(); ++i)
    if (links_[i].name == name) return i;
  return std::nullopt;
}

std::size_t KinematicChain::require_link(std::string_view name) const {
  if (auto i = link_index(name)) return *i;
  throw UrdfError(UrdfError::Code::unknown_link, "unknown link '" + std::string(name) + "'");
}

Eigen::VectorXd KinematicChain::lower_limits() const {
  Eigen::VectorXd v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = actuated_spec(i).limits->lower;
  return v;
}

Eigen::VectorXd KinematicChain::upper_limits() const {
  Eigen::VectorXd v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = actuated_spec(i).limits->upper;
  return v;
}

Eigen::VectorXd KinematicChain::velocity_limits() const {
  Eigen::VectorXd v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = actuated_spec(i).velocity_limit;
  return v;
}

JointConfig KinematicChain::mid_configuration() const {
  return 0.5 * (lower_limits() + upper_limits());
}

JointConfig KinematicChain::clamp(const JointConfig& q) const {
  check_config(q);
  return q.cwiseMax(lower_limits()).cwiseMin(upper_limits());
}

bool KinematicChain::within_limits(const JointConfig& q, double tol) const {
  check_config(q);
  return ((q - lower_limits()).array() >= -tol).all() && ((upper_limits() - q).array() >= -tol).all();
}

void KinematicChain::check_config(const JointConfig& q) const {
  if (q.size() != dof())
    throw DimensionError("joint configuration has " + std::to_string(q.size()) +
                         " entries, chain has " + std::to_string(dof()) + " dof");
}

FkState KinematicChain::compute_state(const JointConfig& q) const {
  check_config(q);
  FkState s;
  s.link_poses.resize(links_.size());
  s.joint_axis.resize(actuated_.size());
  s.joint_origin.resize(actuated_.size());
  for (std::size_t j = 0; j < joints_.size(); ++j) {
    const JointSpec& js = joints_[j];
    const RigidTransform frame = s.link_poses[joint_parent_[j]] * js.origin;
    const int var = joint_variable_[j];
    const double value = var >= 0 ? q[var] : joint_rest_[j];
    RigidTransform motion;
    switch (js.kind) {
      case JointKind::revolute:
      case JointKind::continuous:
        motion.rotation = axis_angle(js.axis, value);
        break;
      case JointKind::prismatic:
        motion.translation = js.axis * value;
        break;
      case JointKind::fixed:
        break;
    }
    if (var >= 0) {
      s.joint_axis[var] = frame.rotation * js.axis;
      s.joint_origin[var] = frame.translation;
    }
    s.link_poses[joint_child_[j]] = frame * motion;
  }
  return s;
}

LinkPoses KinematicChain::forward_kinematics(const JointConfig& q) const {
  return LinkPoses(this, compute_state(q).link_poses);
}

Eigen::Matrix3Xd KinematicChain::point_jacobian(const FkState& state, std::size_t link,
                                                const Vec3& world_point) const {
  Eigen::Matrix3Xd jac = Eigen::Matrix3Xd::Zero(3, dof());
  for (int var : link_vars_[link]) {
    const Vec3& w = state.joint_axis[var];
    if (actuated_spec(var).kind == JointKind::prismatic)
      jac.col(var) = w;
    else
      jac.col(var) = w.cross(world_point - state.joint_origin[var]);
  }
  return jac;
}

Eigen::Matrix3Xd KinematicChain::point_jacobian(const JointConfig& q, std::string_view link,
                                                const Vec3& p_local) const {
  const std::size_t li = require_link(link);
  if (!p_local.allFinite()) throw std::invalid_argument("point_jacobian: non-finite point");
  const FkState s = compute_state(q);
  return point_jacobian(s, li, s.link_poses[li].apply(p_local));
}

void KinematicChain::accumulate_gradient(const FkState& state,
                                         const std::vector<LinkWrench>& wrenches,
                                         Eigen::Ref<Eigen::VectorXd> grad) const {
  for (std::size_t l = 0; l < wrenches.size(); ++l) {
    const LinkWrench& w = wrenches[l];
    if (w.force.isZero(0.0) && w.moment.isZero(0.0)) continue;
    for (int var : link_vars_[l]) {
      const Vec3& axis = state.joint_axis[var];
      if (actuated_spec(var).kind == JointKind::prismatic)
        grad[var] += axis.dot(w.force);
      else  // sum_i (a x (p_i - o)) . f_i = a . (M - o x F)
        grad[var] += axis.dot(w.moment - state.joint_origin[var].cross(w.force));
    }
  }
}

}  // namespace pcgrasp
