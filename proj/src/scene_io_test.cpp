#include "pcgrasp/scene_io.hpp"

#include "fixtures.hpp"

#include "doctest.h"

#include <fstream>
#include <random>

using namespace pcgrasp;
using namespace pcgrasp::testing;

TEST_CASE("xyz round trip is exact") {
  TempDir dir;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  std::vector<Vec3> pts;
  for (int i = 0; i < 100; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
  write_xyz(dir / "c.xyz", pts);
  CHECK(read_xyz(dir / "c.xyz") == pts);
  CHECK(read_point_cloud(dir / "c.xyz") == pts);
}

TEST_CASE("xyz skips comments and rejects junk") {
  TempDir dir;
  write_text(dir / "a.xyz", "# header\n\n1 2 3\n  4 5 6  \n");
  CHECK(read_xyz(dir / "a.xyz") == std::vector<Vec3>{Vec3(1, 2, 3), Vec3(4, 5, 6)});
  write_text(dir / "b.xyz", "1 2\n");
  CHECK_THROWS_AS(read_xyz(dir / "b.xyz"), FormatError);
  write_text(dir / "c.xyz", "1 2 nope\n");
  CHECK_THROWS_AS(read_xyz(dir / "c.xyz"), FormatError);
  CHECK_THROWS(read_xyz(dir / "missing.xyz"));
}

TEST_CASE("ascii ply") {
  TempDir dir;
  write_text(dir / "c.ply",
             "ply\nformat ascii 1.0\nelement vertex 2\nproperty float y\nproperty float x\nproperty float z\n"
             "property uchar red\nelement face 0\nproperty list uchar int vertex_indices\nend_header\n"
             "1 2 3 255\n4 5 6 0\n");
  const auto pts = read_point_cloud(dir / "c.ply");
  REQUIRE(pts.size() == 2);
  CHECK(pts[0] == Vec3(2, 1, 3));
  CHECK(pts[1] == Vec3(5, 4, 6));
  write_text(dir / "bin.ply", "ply\nformat binary_little_endian 1.0\nelement vertex 0\nend_header\n");
  CHECK_THROWS_AS(read_ply(dir / "bin.ply"), FormatError);
}

TEST_CASE("depth image round trip at millimeter precision") {
  TempDir dir;
  DepthImage img;
  img.width = 5;
  img.height = 4;
  img.intrinsics = {50.5, 51.25, 2.0, 1.5};
  img.extrinsics = RigidTransform{rotation_z(0.3) * rotation_x(-2.0), Vec3(0.1, -0.4, 1.2)};
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.3, 4.0);
  for (int i = 0; i < 20; ++i) img.depth.push_back(std::round(u(rng) * 1000.0) / 1000.0);
  img.depth[3] = 0.0;
  write_depth_image(img, dir / "d.pgm", dir / "d.cam");
  const DepthImage back = read_depth_image(dir / "d.pgm", dir / "d.cam");
  CHECK(back.width == 5);
  CHECK(back.height == 4);
  for (std::size_t i = 0; i < img.depth.size(); ++i) CHECK(back.depth[i] == doctest::Approx(img.depth[i]).epsilon(1e-12));
  CHECK_FALSE(back.valid(3, 0));
  CHECK(back.intrinsics.fx == 50.5);
  CHECK(back.intrinsics.cy == 1.5);
  CHECK((back.extrinsics.rotation - img.extrinsics.rotation).norm() < 1e-12);
  CHECK(back.extrinsics.translation == img.extrinsics.translation);
}

TEST_CASE("depth image errors") {
  TempDir dir;
  write_text(dir / "bad.pgm", "P2\n2 2\n255\n1 2 3 4\n");
  write_text(dir / "ok.cam", "1 1 0.5 0.5\n1 0 0 0 0 1 0 0 0 0 1 0\n");
  CHECK_THROWS_AS(read_depth_image(dir / "bad.pgm", dir / "ok.cam"), FormatError);
  {
    std::ofstream out(dir / "short.pgm", std::ios::binary);
    out << "P5\n2 2\n65535\n";
    out.put(0);
  }
  CHECK_THROWS_AS(read_depth_image(dir / "short.pgm", dir / "ok.cam"), FormatError);
}

TEST_CASE("sdf round trip keeps geometry and float32 values") {
  TempDir dir;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  PointCloud cloud;
  for (int i = 0; i < 200; ++i) cloud.points.emplace_back(u(rng), u(rng), u(rng) + 1.0);
  const SignedDistanceGrid g = build_sdf(cloud, 0.05, 0.3);
  save_sdf(g, dir / "g.sdf");
  const SignedDistanceGrid h = load_sdf(dir / "g.sdf");
  CHECK(h.origin() == g.origin());
  CHECK(h.resolution() == g.resolution());
  CHECK(h.dims() == g.dims());
  for (std::size_t i = 0; i < g.vertex_count(); ++i)
    CHECK(h.values()[i] == static_cast<double>(static_cast<float>(g.values()[i])));
  for (int s = 0; s < 200; ++s) {
    const Vec3 p(u(rng), u(rng), u(rng) + 1.0);
    CHECK(g.cell_of(p) == h.cell_of(p));
  }
}

TEST_CASE("sdf load errors") {
  TempDir dir;
  write_text(dir / "a.sdf", "");
  CHECK_THROWS_AS(load_sdf(dir / "a.sdf"), FormatError);
  write_text(dir / "b.sdf", "0 0 0 0.05 2 2 2\nabc");
  CHECK_THROWS_AS(load_sdf(dir / "b.sdf"), FormatError);
  write_text(dir / "c.sdf", "0 0 zero\n");
  CHECK_THROWS_AS(load_sdf(dir / "c.sdf"), FormatError);
}
