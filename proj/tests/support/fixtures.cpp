#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#ifndef PCGRASP_DATA_DIR
#error "PCGRASP_DATA_DIR must point at the data directory"
#endif

namespace pcgrasp::testing {

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    path_ = base / ("pcgrasp_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    if (std::filesystem::create_directories(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::filesystem::path data_dir() { return PCGRASP_DATA_DIR; }
std::filesystem::path arm7_urdf() { return data_dir() / "arm7" / "arm7.urdf"; }

JointConfig arm7_ready() {
  JointConfig q(7);
  q << 0.0, -0.785, 0.0, -2.356, 0.0, 1.571, 0.785;
  return q;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_obj(const std::filesystem::path& path, const std::vector<Vec3>& vertices) {
  std::ostringstream s;
  s << std::setprecision(17);
  for (const auto& v : vertices) s << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
  write_text(path, s.str());
}

std::vector<Vec3> sphere_vertices(double radius) {
  std::vector<Vec3> v{Vec3(0, 0, radius), Vec3(0, 0, -radius)};
  for (int i = 1; i <= 20; ++i) {
    const double theta = M_PI * i / 21.0;
    for (int j = 0; j < 24; ++j) {
      const double phi = 2.0 * M_PI * j / 24.0;
      v.emplace_back(radius * std::sin(theta) * std::cos(phi), radius * std::sin(theta) * std::sin(phi),
                     radius * std::cos(theta));
    }
  }
  return v;
}

std::vector<Vec3> cube_vertices(double half) {
  std::vector<Vec3> v;
  for (int i = 0; i < 8; ++i) v.emplace_back(i & 1 ? half : -half, i & 2 ? half : -half, i & 4 ? half : -half);
  return v;
}

namespace {

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

std::string vec(const Vec3& v) { return fmt(v.x()) + " " + fmt(v.y()) + " " + fmt(v.z()); }

Eigen::Matrix3d rpy_matrix(const Vec3& rpy) {
  return (Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()) * Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
          Eigen::AngleAxisd(rpy.x(), Vec3::UnitX()))
      .toRotationMatrix();
}

}  // namespace

std::string planar_2r_urdf(const std::filesystem::path& mesh_dir) {
  std::string tool_visual;
  if (!mesh_dir.empty()) {
    write_obj(mesh_dir / "tool.obj", {Vec3(0, 0, 0), Vec3(0.1, 0, 0), Vec3(0, 0.1, 0), Vec3(0, 0, 0.1)});
    tool_visual = R"(<visual><geometry><mesh filename="tool.obj"/></geometry></visual>)";
  }
  return R"(<?xml version="1.0"?>
<robot name="planar">
  <link name="base"/>
  <link name="l1"/>
  <link name="l2"/>
  <link name="tool">)" +
         tool_visual + R"(</link>
  <joint name="j1" type="revolute">
    <parent link="base"/><child link="l1"/>
    <origin xyz="0 0 0" rpy="0 0 0"/><axis xyz="0 0 1"/>
    <limit lower="-3.14159" upper="3.14159" velocity="2"/>
  </joint>
  <joint name="j2" type="revolute">
    <parent link="l1"/><child link="l2"/>
    <origin xyz="1 0 0" rpy="0 0 0"/><axis xyz="0 0 1"/>
    <limit lower="-3.14159" upper="3.14159" velocity="2"/>
  </joint>
  <joint name="tool_joint" type="fixed">
    <parent link="l2"/><child link="tool"/>
    <origin xyz="1 0 0" rpy="0 0 0"/>
  </joint>
</robot>
)";
}

ChainFixture random_chain(std::uint64_t seed, int dof, bool allow_prismatic, const std::filesystem::path& mesh_dir) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  ChainFixture c;
  c.lower.resize(dof);
  c.upper.resize(dof);
  c.link_names.push_back("base_link");
  for (int i = 1; i <= dof; ++i) c.link_names.push_back("l" + std::to_string(i));
  c.link_names.push_back("tool");

  std::ostringstream u;
  u << "<?xml version=\"1.0\"?>\n<robot name=\"random\">\n";
  for (std::size_t li = 0; li < c.link_names.size(); ++li) {
    u << "  <link name=\"" << c.link_names[li] << "\">";
    if (!mesh_dir.empty()) {
      std::vector<Vec3> verts;
      for (int k = 0; k < 40; ++k) verts.emplace_back(uni(-0.08, 0.08), uni(-0.08, 0.08), uni(-0.05, 0.15));
      const std::string file = "mesh_" + c.link_names[li] + ".obj";
      write_obj(mesh_dir / file, verts);
      u << "<visual><geometry><mesh filename=\"" << file << "\"/></geometry></visual>";
    }
    u << "</link>\n";
  }
  for (int i = 0; i < dof; ++i) {
    const Vec3 xyz(uni(-0.2, 0.2), uni(-0.2, 0.2), uni(0.05, 0.3));
    const Vec3 rpy(uni(-M_PI, M_PI), uni(-1.5, 1.5), uni(-M_PI, M_PI));
    Vec3 axis(uni(-1, 1), uni(-1, 1), uni(-1, 1));
    axis.normalize();
    const bool prismatic = allow_prismatic && uni(0, 1) < 0.3;
    const double lo = prismatic ? uni(-0.3, -0.05) : uni(-2.5, -0.5);
    const double hi = prismatic ? uni(0.05, 0.3) : uni(0.5, 2.5);
    Eigen::Isometry3d o = Eigen::Isometry3d::Identity();
    o.linear() = rpy_matrix(rpy);
    o.translation() = xyz;
    c.origins.push_back(o);
    c.axes.push_back(axis);
    c.prismatic.push_back(prismatic);
    c.lower[i] = lo;
    c.upper[i] = hi;
    u << "  <joint name=\"j" << i + 1 << "\" type=\"" << (prismatic ? "prismatic" : "revolute") << "\">\n"
      << "    <parent link=\"" << c.link_names[i] << "\"/><child link=\"" << c.link_names[i + 1] << "\"/>\n"
      << "    <origin xyz=\"" << vec(xyz) << "\" rpy=\"" << vec(rpy) << "\"/>\n"
      << "    <axis xyz=\"" << vec(axis) << "\"/>\n"
      << "    <limit lower=\"" << fmt(lo) << "\" upper=\"" << fmt(hi) << "\" velocity=\"2.0\"/>\n"
      << "  </joint>\n";
  }
  const Vec3 txyz(uni(-0.05, 0.05), uni(-0.05, 0.05), uni(0.05, 0.15));
  const Vec3 trpy(uni(-1, 1), uni(-1, 1), uni(-1, 1));
  c.tool_offset.linear() = rpy_matrix(trpy);
  c.tool_offset.translation() = txyz;
  u << "  <joint name=\"tool_joint\" type=\"fixed\">\n"
    << "    <parent link=\"l" << dof << "\"/><child link=\"tool\"/>\n"
    << "    <origin xyz=\"" << vec(txyz) << "\" rpy=\"" << vec(trpy) << "\"/>\n"
    << "  </joint>\n</robot>\n";
  c.urdf = u.str();
  return c;
}

std::vector<Eigen::Isometry3d> oracle_fk(const ChainFixture& c, const Eigen::VectorXd& q) {
  std::vector<Eigen::Isometry3d> poses{Eigen::Isometry3d::Identity()};
  for (int i = 0; i < c.dof(); ++i) {
    Eigen::Isometry3d motion = Eigen::Isometry3d::Identity();
    if (c.prismatic[i])
      motion.translation() = q[i] * c.axes[i];
    else
      motion.linear() = Eigen::AngleAxisd(q[i], c.axes[i]).toRotationMatrix();
    poses.push_back(poses.back() * c.origins[i] * motion);
  }
  poses.push_back(poses.back() * c.tool_offset);
  return poses;
}

Eigen::VectorXd random_in_limits(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd q(lower.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = std::uniform_real_distribution<double>(lower[i], upper[i])(rng);
  return q;
}

}  // namespace pcgrasp::testing
