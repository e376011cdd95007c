#pragma once

#include "pcgrasp/kinematics.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcgrasp {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vertex positions of an OBJ ("v" lines) or ASCII STL ("vertex" lines) file,
/// duplicates removed, first occurrence order kept. Faces are ignored.
std::vector<Vec3> load_mesh_vertices(const std::filesystem::path& path);

/// Greedy farthest-point subset of `vertices`. The seed fixes the start vertex
/// and the order in which equal distances are resolved.
std::vector<Vec3> farthest_point_sample(std::span<const Vec3> vertices, std::size_t count,
                                        std::uint64_t seed);

/// Points of one link in its local frame, stored as structure of arrays.
struct LinkPoints {
  std::size_t link_index = 0;
  std::vector<double> x, y, z;

  std::size_t size() const { return x.size(); }
  Vec3 point(std::size_t i) const { return {x[i], y[i], z[i]}; }
  void push_back(const Vec3& p) {
    x.push_back(p.x());
    y.push_back(p.y());
    z.push_back(p.z());
  }
};

/// Robot surface as per-link local point sets, one entry per chain link
/// (links without meshes hold no points).
struct SurfacePointSet {
  std::vector<LinkPoints> links;
  std::size_t points_per_link = 100;

  std::size_t total() const;
  const LinkPoints& for_link(std::size_t link_index) const { return links[link_index]; }
};

/// Points on the end effector, expressed in the tool link frame.
struct GripperPointSet {
  std::vector<Vec3> points;

  std::size_t size() const { return points.size(); }
  /// Largest distance of a point from the tool frame origin.
  double radius() const;
};

SurfacePointSet sample_surface_points(const KinematicChain& chain, std::size_t points_per_link = 100,
                                      std::uint64_t seed = 0);

/// Tool link surface points; throws if fewer than three or all collinear.
GripperPointSet gripper_points(const KinematicChain& chain, const SurfacePointSet& surface);
void validate_gripper_points(const GripperPointSet& gripper);

/// World positions of all surface points, link by link, in stable order.
std::vector<Vec3> transform_points(const KinematicChain& chain, const JointConfig& q,
                                   const SurfacePointSet& points);

/// World positions of surface points as structure of arrays, reusing buffers.
struct WorldPoints {
  std::vector<double> x, y, z;
  std::vector<std::size_t> link_offset;  // start of each link's block; size links+1
  Vec3 point(std::size_t i) const { return {x[i], y[i], z[i]}; }
  std::size_t size() const { return x.size(); }
};
void transform_points(const FkState& state, const SurfacePointSet& points, WorldPoints& out);

}  // namespace pcgrasp
