#include "pcgrasp/synthetic.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace pcgrasp {

SceneKind parse_scene_kind(std::string_view name) {
  if (name == "tabletop") return SceneKind::tabletop;
  if (name == "shelf") return SceneKind::shelf;
  if (name == "custom") return SceneKind::custom;
  throw std::invalid_argument("unknown scene kind '" + std::string(name) + "' (tabletop|shelf|custom)");
}

std::string_view scene_kind_name(SceneKind kind) {
  switch (kind) {
    case SceneKind::tabletop: return "tabletop";
    case SceneKind::shelf: return "shelf";
    case SceneKind::custom: return "custom";
  }
  return "?";
}

RigidTransform CameraSpec::extrinsics() const {
  const Vec3 z = (look_at - position).normalized();
  Vec3 x = z.cross(Vec3::UnitZ());
  if (x.norm() < 1e-9) x = Vec3::UnitY().cross(z);
  x.normalize();
  const Vec3 y = z.cross(x);
  RigidTransform t;
  t.rotation.col(0) = x;
  t.rotation.col(1) = y;
  t.rotation.col(2) = z;
  t.translation = position;
  return t;
}

CameraIntrinsics CameraSpec::intrinsics() const {
  return {focal, focal, (width - 1) / 2.0, (height - 1) / 2.0};
}

namespace {

Box make_box(const Vec3& centre, const Vec3& size) { return {centre - 0.5 * size, centre + 0.5 * size}; }

/// Tool pose whose approach axis (+z) points along `approach` and whose grasp
/// centre, `reach` along that axis, lands on `target`.
RigidTransform grasp_pose(const Vec3& target, const Mat3& rotation, double reach) {
  return {rotation, target - reach * rotation.col(2)};
}

constexpr double kGraspReach = 0.10;  // tool origin to grasp centre

SceneSpec tabletop(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 11);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  SceneSpec s;
  s.kind = SceneKind::tabletop;
  s.standoff_offset = 0.10;
  s.camera.position = Vec3(-0.15, 0.0, 1.25);
  s.camera.look_at = Vec3(0.65, 0.0, 0.0);
  s.boxes.push_back({Vec3(0.25, -0.6, -0.04), Vec3(1.05, 0.6, 0.0)});

  const Vec3 target(uni(0.42, 0.6), uni(-0.22, 0.22), 0.08);
  // Obstacles stand beside the target, off the camera's line of sight to it.
  for (int side : {-1, 1}) {
    const Vec3 size(uni(0.06, 0.12), uni(0.06, 0.1), uni(0.12, 0.25));
    const Vec3 centre(target.x() + uni(-0.08, 0.12), target.y() + side * uni(0.2, 0.26) + side * 0.5 * size.y(),
                      0.5 * size.z());
    s.boxes.push_back(make_box(centre, size));
  }
  for (int k = 0; k < 6; ++k) {
    const double yaw = k * M_PI / 6.0;
    s.goals.push_back(grasp_pose(target, rotation_z(yaw) * rotation_x(M_PI), kGraspReach));
    s.intended_feasible.push_back(k);
  }
  // Decoys: one buried in an obstacle, one out of reach.
  const Box& ob = s.boxes[1];
  s.goals.push_back(grasp_pose(0.5 * (ob.lo + ob.hi), rotation_x(M_PI), 0.0));
  s.goals.push_back(grasp_pose(Vec3(1.6, 0.0, 0.3), rotation_x(M_PI), kGraspReach));
  return s;
}

SceneSpec shelf(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 104729 + 3);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  SceneSpec s;
  s.kind = SceneKind::shelf;
  s.standoff_offset = 0.20;
  s.camera.position = Vec3(-0.3, 0.0, 0.85);
  s.camera.look_at = Vec3(0.7, 0.0, 0.4);

  const double x0 = uni(0.42, 0.48);
  const double depth = 0.35;
  const double bottom = uni(0.27, 0.31);
  const double gap = uni(0.38, 0.42);
  const double half_width = 0.4;
  const double t = 0.03;
  const double top = bottom + gap;
  s.boxes.push_back({Vec3(x0, -half_width, bottom - t), Vec3(x0 + depth, half_width, bottom)});
  s.boxes.push_back({Vec3(x0, -half_width, top), Vec3(x0 + depth, half_width, top + t)});
  s.boxes.push_back({Vec3(x0 + depth, -half_width, bottom - t), Vec3(x0 + depth + t, half_width, top + t)});
  s.boxes.push_back({Vec3(x0, -half_width - t, bottom - t), Vec3(x0 + depth, -half_width, top + t)});
  s.boxes.push_back({Vec3(x0, half_width, bottom - t), Vec3(x0 + depth, half_width + t, top + t)});

  const Vec3 target(x0 + 0.12, uni(-0.12, 0.12), bottom + 0.5 * gap);
  // Tool +z along world +x, pitched down into the shelf.
  const Mat3 forward = rotation_y(M_PI / 2.0 + uni(0.35, 0.6));
  for (int k = 0; k < 4; ++k) {
    const double roll = (k - 1) * M_PI / 4.0;
    s.goals.push_back(grasp_pose(target, forward * rotation_z(roll), kGraspReach));
    s.intended_feasible.push_back(k);
  }
  // Decoys: one inside the back wall, one out of reach.
  s.goals.push_back(grasp_pose(Vec3(x0 + depth + 0.5 * t, target.y(), target.z()), forward, 0.0));
  s.goals.push_back(grasp_pose(Vec3(1.7, 0.0, 0.4), forward, kGraspReach));
  return s;
}

/// Ray parameter of the first intersection with an axis-aligned box.
std::optional<double> ray_box(const Vec3& o, const Vec3& d, const Box& b) {
  double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (std::abs(d[a]) < 1e-15) {
      if (o[a] < b.lo[a] || o[a] > b.hi[a]) return std::nullopt;
      continue;
    }
    double ta = (b.lo[a] - o[a]) / d[a], tb = (b.hi[a] - o[a]) / d[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  return t0;
}

Vec3 json_vec3(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error(std::string("scene spec: ") + what + " must be [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

SceneSpec make_scene_spec(SceneKind kind, std::uint64_t seed) {
  switch (kind) {
    case SceneKind::tabletop: return tabletop(seed);
    case SceneKind::shelf: return shelf(seed);
    case SceneKind::custom: break;
  }
  throw std::invalid_argument("custom scenes come from a spec file");
}

SceneSpec read_scene_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read scene spec " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("scene spec is not valid JSON: " + std::string(e.what()));
  }
  SceneSpec s;
  s.kind = SceneKind::custom;
  if (!doc.contains("boxes") || !doc["boxes"].is_array() || doc["boxes"].empty())
    throw std::runtime_error("scene spec needs a non-empty \"boxes\" array");
  for (const auto& b : doc["boxes"]) {
    Box box{json_vec3(b.at("lo"), "lo"), json_vec3(b.at("hi"), "hi")};
    if (!(box.lo.array() <= box.hi.array()).all()) throw std::runtime_error("scene spec: box lo exceeds hi");
    s.boxes.push_back(box);
  }
  if (doc.contains("camera")) {
    const auto& c = doc["camera"];
    if (c.contains("position")) s.camera.position = json_vec3(c["position"], "camera.position");
    if (c.contains("look_at")) s.camera.look_at = json_vec3(c["look_at"], "camera.look_at");
    s.camera.width = c.value("width", s.camera.width);
    s.camera.height = c.value("height", s.camera.height);
    s.camera.focal = c.value("focal", s.camera.focal);
  }
  s.density = doc.value("density", s.density);
  s.standoff_offset = doc.value("standoff_offset", s.standoff_offset);
  if (!(s.density > 0.0)) throw std::runtime_error("scene spec: density must be positive");
  if (doc.contains("goals")) {
    for (const auto& g : doc["goals"]) {
      if (!g.contains("pose") || g["pose"].size() != 16) throw std::runtime_error("scene spec: goal needs 16 values");
      double m[16];
      for (int i = 0; i < 16; ++i) m[i] = g["pose"][i].get<double>();
      RigidTransform t = RigidTransform::from_matrix16(m);
      if (t.orthonormality_error() > 1e-6) throw std::runtime_error("scene spec: goal is not a rigid transform");
      t.rotation = orthonormalize(t.rotation);
      s.intended_feasible.push_back(static_cast<int>(s.goals.size()));
      s.goals.push_back(t);
    }
  }
  return s;
}

DepthImage render_depth(const std::vector<Box>& boxes, const CameraSpec& camera) {
  DepthImage img;
  img.width = camera.width;
  img.height = camera.height;
  img.intrinsics = camera.intrinsics();
  img.extrinsics = camera.extrinsics();
  img.depth.assign(static_cast<std::size_t>(img.width) * img.height, 0.0);
  const Mat3& r = img.extrinsics.rotation;
  const Vec3& o = img.extrinsics.translation;
  const auto& k = img.intrinsics;
  for (int v = 0; v < img.height; ++v) {
    for (int u = 0; u < img.width; ++u) {
      // Direction with unit camera z, so the ray parameter is the depth.
      const Vec3 dc((u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0);
      const Vec3 d = r * dc;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& b : boxes) {
        if (auto t = ray_box(o, d, b); t && *t > 0.0) best = std::min(best, *t);
      }
      if (std::isfinite(best)) img.depth[static_cast<std::size_t>(v) * img.width + u] = best;
    }
  }
  return img;
}

SyntheticScene generate_scene(const SceneSpec& spec, std::uint64_t seed) {
  if (spec.boxes.empty()) throw std::invalid_argument("scene has no obstacles");
  if (!(spec.density > 0.0)) throw std::invalid_argument("density must be positive");
  SyntheticScene scene;
  scene.spec = spec;
  std::mt19937_64 rng(seed ^ 0xA5A5A5A5ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& b : spec.boxes) {
    const Vec3 size = b.hi - b.lo;
    for (int axis = 0; axis < 3; ++axis) {
      const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
      const double area = size[a1] * size[a2];
      const auto count = static_cast<std::size_t>(std::ceil(area * spec.density));
      for (int side = 0; side < 2; ++side) {
        for (std::size_t i = 0; i < count; ++i) {
          Vec3 p;
          p[axis] = side ? b.hi[axis] : b.lo[axis];
          p[a1] = b.lo[a1] + unit(rng) * size[a1];
          p[a2] = b.lo[a2] + unit(rng) * size[a2];
          scene.cloud.points.push_back(p);
        }
      }
    }
  }
  if (scene.cloud.points.empty()) throw std::invalid_argument("scene boxes have no surface area");
  scene.depth = render_depth(spec.boxes, spec.camera);
  scene.cloud.source = std::make_shared<const DepthImage>(scene.depth);
  return scene;
}

}  // namespace pcgrasp
