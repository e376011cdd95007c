#include "pcgrasp/robot_model.hpp"

#include "pcgrasp/simd/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

namespace pcgrasp {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace

std::vector<Vec3> load_mesh_vertices(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot read mesh file " + path.string());
  const std::string ext = lower_extension(path);
  const bool stl = ext == ".stl";
  if (!stl && ext != ".obj") throw MeshError("unsupported mesh format: " + path.string());

  std::vector<Vec3> out;
  std::map<std::tuple<double, double, double>, bool> seen;
  std::string line;
  bool first_line = true;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (stl && first_line && tag != "solid")
      throw MeshError("binary STL is not supported: " + path.string());
    first_line = false;
    if ((stl && tag != "vertex") || (!stl && tag != "v")) continue;
    Vec3 v;
    if (!(ls >> v.x() >> v.y() >> v.z())) throw MeshError("bad vertex line in " + path.string());
    if (seen.emplace(std::make_tuple(v.x(), v.y(), v.z()), true).second) out.push_back(v);
  }
  if (out.empty()) throw MeshError("mesh has no vertices: " + path.string());
  return out;
}

std::vector<Vec3> farthest_point_sample(std::span<const Vec3> vertices, std::size_t count,
                                        std::uint64_t seed) {
  const std::size_t n = vertices.size();
  count = std::min(count, n);
  if (count == 0) return {};

  // Seeded visiting order; ties go to the earlier entry.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  std::vector<bool> taken(n, false);
  std::vector<Vec3> out;
  out.reserve(count);
  std::size_t current = order[0];
  for (std::size_t k = 0; k < count; ++k) {
    taken[current] = true;
    out.push_back(vertices[current]);
    double best = -1.0;
    std::size_t next = current;
    for (std::size_t idx : order) {
      if (taken[idx]) continue;
      const double d2 = (vertices[idx] - vertices[current]).squaredNorm();
      if (d2 < min_d2[idx]) min_d2[idx] = d2;
      if (min_d2[idx] > best) {
        best = min_d2[idx];
        next = idx;
      }
    }
    current = next;
  }
  return out;
}

std::size_t SurfacePointSet::total() const {
  std::size_t n = 0;
  for (const auto& l : links) n += l.size();
  return n;
}

double GripperPointSet::radius() const {
  double r = 0.0;
  for (const auto& p : points) r = std::max(r, p.norm());
  return r;
}

SurfacePointSet sample_surface_points(const KinematicChain& chain, std::size_t points_per_link,
                                      std::uint64_t seed) {
  SurfacePointSet set;
  set.points_per_link = points_per_link;
  set.links.resize(chain.links().size());
  for (std::size_t li = 0; li < chain.links().size(); ++li) {
    set.links[li].link_index = li;
    std::vector<Vec3> vertices;
    for (const MeshRef& mesh : chain.links()[li].meshes) {
      for (const Vec3& v : load_mesh_vertices(mesh.resolved))
        vertices.push_back(mesh.origin.apply(v.cwiseProduct(mesh.scale)));
    }
    if (vertices.empty()) continue;
    const std::uint64_t link_seed = seed * 0x9E3779B97F4A7C15ULL + li;
    for (const Vec3& p : farthest_point_sample(vertices, points_per_link, link_seed))
      set.links[li].push_back(p);
  }
  return set;
}

void validate_gripper_points(const GripperPointSet& gripper) {
  if (gripper.size() < 3)
    throw std::invalid_argument("gripper point set needs at least 3 points");
  const Vec3& a = gripper.points[0];
  double scale = 0.0;
  for (const auto& p : gripper.points) scale = std::max(scale, (p - a).norm());
  for (std::size_t i = 1; i < gripper.size(); ++i) {
    for (std::size_t j = i + 1; j < gripper.size(); ++j) {
      const double area = (gripper.points[i] - a).cross(gripper.points[j] - a).norm();
      if (area > 1e-9 * std::max(scale * scale, 1e-12)) return;
    }
  }
  throw std::invalid_argument("gripper points are collinear");
}

GripperPointSet gripper_points(const KinematicChain& chain, const SurfacePointSet& surface) {
  GripperPointSet g;
  const LinkPoints& tool = surface.for_link(chain.tool_index());
  for (std::size_t i = 0; i < tool.size(); ++i) g.points.push_back(tool.point(i));
  validate_gripper_points(g);
  return g;
}

void transform_points(const FkState& state, const SurfacePointSet& points, WorldPoints& out) {
  const std::size_t total = points.total();
  out.x.resize(total);
  out.y.resize(total);
  out.z.resize(total);
  out.link_offset.resize(points.links.size() + 1);
  const auto& k = simd::kernels();
  std::size_t offset = 0;
  for (std::size_t li = 0; li < points.links.size(); ++li) {
    out.link_offset[li] = offset;
    const LinkPoints& lp = points.links[li];
    if (lp.size() == 0) continue;
    const RigidTransform& pose = state.link_poses[lp.link_index];
    double r[9];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) r[3 * a + b] = pose.rotation(a, b);
    k.transform_points(r, pose.translation.data(),
                       {lp.x.data(), lp.y.data(), lp.z.data(), lp.size()},
                       {out.x.data() + offset, out.y.data() + offset, out.z.data() + offset, lp.size()});
    offset += lp.size();
  }
  out.link_offset[points.links.size()] = offset;
}

std::vector<Vec3> transform_points(const KinematicChain& chain, const JointConfig& q,
                                   const SurfacePointSet& points) {
  WorldPoints world;
  transform_points(chain.compute_state(q), points, world);
  std::vector<Vec3> out(world.size());
  for (std::size_t i = 0; i < world.size(); ++i) out[i] = world.point(i);
  return out;
}

}  // namespace pcgrasp
