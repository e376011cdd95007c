#pragma once

#include "pcgrasp/kinematics.hpp"
#include "pcgrasp/robot_model.hpp"

#include <Eigen/Geometry>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pcgrasp::testing {

/// Directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::filesystem::path data_dir();
std::filesystem::path arm7_urdf();
/// Ready pose of the bundled arm (hand pointing down in front of the base).
JointConfig arm7_ready();

void write_text(const std::filesystem::path& path, const std::string& text);
void write_obj(const std::filesystem::path& path, const std::vector<Vec3>& vertices);
/// UV sphere with 20 latitude rings of 24 vertices plus both poles: 482 vertices.
std::vector<Vec3> sphere_vertices(double radius);
std::vector<Vec3> cube_vertices(double half);

/// Two revolute joints about z with unit links along x, tool frame at the
/// end. With mesh_dir set, the tool link gets a small non-collinear mesh.
std::string planar_2r_urdf(const std::filesystem::path& mesh_dir = {});

/// Random serial chain description plus the data an independent FK needs.
struct ChainFixture {
  std::string urdf;
  std::vector<Eigen::Isometry3d> origins;  // per movable joint, parent link -> joint
  std::vector<Vec3> axes;
  std::vector<bool> prismatic;
  Eigen::Isometry3d tool_offset = Eigen::Isometry3d::Identity();
  Eigen::VectorXd lower, upper;
  std::vector<std::string> link_names;  // base, l1..ln, tool
  int dof() const { return static_cast<int>(axes.size()); }
};

/// Links base_link, l1..l<dof>, tool. Every link gets a random 40-vertex mesh
/// when mesh_dir is given.
ChainFixture random_chain(std::uint64_t seed, int dof, bool allow_prismatic = false,
                          const std::filesystem::path& mesh_dir = {});

/// Link poses by straightforward composition of Eigen isometries, in
/// link_names order.
std::vector<Eigen::Isometry3d> oracle_fk(const ChainFixture& chain, const Eigen::VectorXd& q);

Eigen::VectorXd random_in_limits(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, std::uint64_t seed);

}  // namespace pcgrasp::testing
