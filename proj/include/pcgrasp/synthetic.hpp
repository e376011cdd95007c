#pragma once

#include "pcgrasp/costs.hpp"
#include "pcgrasp/scene.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pcgrasp {

enum class SceneKind { tabletop, shelf, custom };
SceneKind parse_scene_kind(std::string_view name);
std::string_view scene_kind_name(SceneKind kind);

struct Box {
  Vec3 lo;
  Vec3 hi;
  bool contains(const Vec3& p) const { return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all(); }
};

struct CameraSpec {
  Vec3 position = Vec3(-0.1, 0.0, 1.2);
  Vec3 look_at = Vec3(0.6, 0.0, 0.0);
  int width = 320;
  int height = 240;
  double focal = 280.0;  // pixels

  /// Camera-to-base transform with +z forward and +y pointing down the image.
  RigidTransform extrinsics() const;
  CameraIntrinsics intrinsics() const;
};

/// Obstacles are boxes sampled into a point cloud; goals are tool poses.
struct SceneSpec {
  SceneKind kind = SceneKind::tabletop;
  std::vector<Box> boxes;
  CameraSpec camera;
  double density = 2500.0;  // points per square meter of box surface
  double standoff_offset = 0.10;
  GoalSet goals;
  /// Goals built to be reachable and collision free; the rest are decoys.
  std::vector<int> intended_feasible;
};

/// Seeded tabletop or shelf layout.
SceneSpec make_scene_spec(SceneKind kind, std::uint64_t seed);

/// JSON with "boxes": [{"lo": [3], "hi": [3]}], optional "camera":
/// {"position", "look_at", "width", "height", "focal"}, optional "density",
/// "standoff_offset" and "goals" (same layout as goal files).
SceneSpec read_scene_spec(const std::filesystem::path& path);

struct SyntheticScene {
  SceneSpec spec;
  PointCloud cloud;  // source set to the rendered depth image
  DepthImage depth;
};

/// Samples the box surfaces and ray-casts the depth image. Deterministic in seed.
SyntheticScene generate_scene(const SceneSpec& spec, std::uint64_t seed);

/// Camera-frame depth of the first box hit along each pixel ray (0 on a miss).
DepthImage render_depth(const std::vector<Box>& boxes, const CameraSpec& camera);

}  // namespace pcgrasp
