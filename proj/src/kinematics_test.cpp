#include "pcgrasp/kinematics.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include "doctest.h"

#include <random>

using namespace pcgrasp;
using namespace pcgrasp::testing;

namespace {

Eigen::Isometry3d to_iso(const RigidTransform& t) {
  Eigen::Isometry3d i = Eigen::Isometry3d::Identity();
  i.linear() = t.rotation;
  i.translation() = t.translation;
  return i;
}

const char* kFixedMiddle = R"(<robot name="r">
  <link name="a"/><link name="b"/><link name="c"/><link name="d"/>
  <joint name="j1" type="revolute"><parent link="a"/><child link="b"/><axis xyz="0 0 1"/>
    <limit lower="-1" upper="1" velocity="1"/></joint>
  <joint name="fix" type="fixed"><parent link="b"/><child link="c"/><origin xyz="0.5 0 0"/></joint>
  <joint name="j2" type="prismatic"><parent link="c"/><child link="d"/><axis xyz="1 0 0"/>
    <limit lower="0" upper="0.3" velocity="0.5"/></joint>
</robot>)";

}  // namespace

TEST_CASE("planar 2R parses with two degrees of freedom") {
  const KinematicChain chain = parse_urdf(planar_2r_urdf(), "base", "tool");
  CHECK(chain.dof() == 2);
  CHECK(chain.tool_link() == "tool");
  CHECK(chain.base_link() == "base");
  CHECK(chain.lower_limits()[0] == doctest::Approx(-3.14159));
  CHECK(chain.velocity_limits()[1] == 2.0);
}

TEST_CASE("fixed joints do not count toward dof") {
  const KinematicChain chain = parse_urdf(kFixedMiddle, "a", "d");
  CHECK(chain.dof() == 2);
  CHECK(chain.actuated_spec(1).kind == JointKind::prismatic);
}

TEST_CASE("urdf errors") {
  SUBCASE("absent tool link") {
    try {
      parse_urdf(planar_2r_urdf(), "base", "gripper");
      FAIL("expected an error");
    } catch (const UrdfError& e) {
      CHECK(e.code() == UrdfError::Code::disconnected_tool);
    }
  }
  SUBCASE("tool not below base") {
    try {
      parse_urdf(planar_2r_urdf(), "l2", "l1");
      FAIL("expected an error");
    } catch (const UrdfError& e) {
      CHECK(e.code() == UrdfError::Code::disconnected_tool);
    }
  }
  SUBCASE("malformed xml") {
    try {
      parse_urdf("<robot><link name='a'></robot>", "a", "a");
      FAIL("expected an error");
    } catch (const UrdfError& e) {
      CHECK(e.code() == UrdfError::Code::malformed);
    }
  }
  SUBCASE("floating joint") {
    const std::string text = R"(<robot name="r"><link name="a"/><link name="b"/>
      <joint name="f" type="floating"><parent link="a"/><child link="b"/></joint></robot>)";
    try {
      parse_urdf(text, "a", "b");
      FAIL("expected an error");
    } catch (const UrdfError& e) {
      CHECK(e.code() == UrdfError::Code::unsupported_joint);
    }
  }
  SUBCASE("planar joint") {
    const std::string text = R"(<robot name="r"><link name="a"/><link name="b"/>
      <joint name="f" type="planar"><parent link="a"/><child link="b"/></joint></robot>)";
    CHECK_THROWS_AS(parse_urdf(text, "a", "b"), UrdfError);
  }
  SUBCASE("crossed limits") {
    const std::string text = R"(<robot name="r"><link name="a"/><link name="b"/>
      <joint name="j" type="revolute"><parent link="a"/><child link="b"/><axis xyz="0 0 1"/>
      <limit lower="1" upper="-1" velocity="1"/></joint></robot>)";
    CHECK_THROWS_AS(parse_urdf(text, "a", "b"), UrdfError);
  }
}

TEST_CASE("continuous joints get a full turn each way") {
  const std::string text = R"(<robot name="r"><link name="a"/><link name="b"/>
    <joint name="c" type="continuous"><parent link="a"/><child link="b"/><axis xyz="0 1 0"/></joint></robot>)";
  const KinematicChain chain = parse_urdf(text, "a", "b");
  CHECK(chain.lower_limits()[0] == doctest::Approx(-2.0 * M_PI));
  CHECK(chain.upper_limits()[0] == doctest::Approx(2.0 * M_PI));
}

TEST_CASE("planar 2R forward kinematics") {
  const KinematicChain chain = parse_urdf(planar_2r_urdf(), "base", "tool");
  const RigidTransform t0 = chain.forward_kinematics(Eigen::Vector2d(0, 0)).at("tool");
  CHECK((t0.translation - Vec3(2, 0, 0)).norm() < 1e-12);
  CHECK((t0.rotation - Mat3::Identity()).norm() < 1e-12);
  const RigidTransform t1 = chain.forward_kinematics(Eigen::Vector2d(M_PI / 2, 0)).at("tool");
  CHECK((t1.translation - Vec3(0, 2, 0)).norm() < 1e-12);
  CHECK((t1.rotation - rotation_z(M_PI / 2)).norm() < 1e-12);
}

TEST_CASE("forward kinematics matches an independent composition on random chains") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ChainFixture fx = random_chain(seed, 7, seed % 2 == 0);
    const KinematicChain chain = parse_urdf(fx.urdf, "base_link", "tool");
    REQUIRE(chain.dof() == 7);
    for (int s = 0; s < 5; ++s) {
      const Eigen::VectorXd q = random_in_limits(fx.lower, fx.upper, seed * 100 + s);
      const LinkPoses poses = chain.forward_kinematics(q);
      const auto expected = oracle_fk(fx, q);
      for (std::size_t li = 0; li < fx.link_names.size(); ++li) {
        const Eigen::Isometry3d got = to_iso(poses.at(fx.link_names[li]));
        CHECK((got.matrix() - expected[li].matrix()).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("zero configuration composes the joint origins only") {
  const ChainFixture fx = random_chain(42, 6);
  const KinematicChain chain = parse_urdf(fx.urdf, "base_link", "tool");
  Eigen::Isometry3d acc = Eigen::Isometry3d::Identity();
  for (const auto& o : fx.origins) acc = acc * o;
  acc = acc * fx.tool_offset;
  const RigidTransform tool = chain.forward_kinematics(Eigen::VectorXd::Zero(6)).at("tool");
  CHECK((to_iso(tool).matrix() - acc.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("every link rotation is orthonormal") {
  const ChainFixture fx = random_chain(8, 7, true);
  const KinematicChain chain = parse_urdf(fx.urdf, "base_link", "tool");
  for (int s = 0; s < 20; ++s) {
    const LinkPoses poses = chain.forward_kinematics(random_in_limits(fx.lower, fx.upper, s));
    for (std::size_t i = 0; i < poses.size(); ++i) CHECK(poses[i].orthonormality_error() < 1e-9);
  }
}

TEST_CASE("forward kinematics is deterministic") {
  const ChainFixture fx = random_chain(11, 7, true);
  const KinematicChain chain = parse_urdf(fx.urdf, "base_link", "tool");
  const Eigen::VectorXd q = random_in_limits(fx.lower, fx.upper, 1);
  const auto a = chain.forward_kinematics(q).to_map();
  const auto b = chain.forward_kinematics(q).to_map();
  for (const auto& [name, t] : a) {
    CHECK(t.rotation == b.at(name).rotation);
    CHECK(t.translation == b.at(name).translation);
  }
}

TEST_CASE("dimension mismatch throws") {
  const KinematicChain chain = parse_urdf(planar_2r_urdf(), "base", "tool");
  CHECK_THROWS_AS(chain.forward_kinematics(Eigen::VectorXd::Zero(3)), DimensionError);
  CHECK_THROWS_AS(chain.point_jacobian(Eigen::VectorXd::Zero(1), "tool", Vec3::Zero()), DimensionError);
}

TEST_CASE("point jacobian special columns") {
  SUBCASE("a point on a revolute axis does not move") {
    const KinematicChain chain = parse_urdf(planar_2r_urdf(), "base", "tool");
    const Eigen::Vector2d q(0.3, -0.4);
    // Joint 2 sits at the origin of l2; its axis is the local z axis.
    const Eigen::Matrix3Xd j = chain.point_jacobian(q, "l2", Vec3(0, 0, 0.7));
    CHECK(j.col(1).norm() < 1e-14);
    CHECK(j.col(0).norm() > 0.5);
  }
  SUBCASE("prismatic column equals the world axis") {
    const KinematicChain chain = parse_urdf(kFixedMiddle, "a", "d");
    const Eigen::Vector2d q(0.6, 0.1);
    const Eigen::Matrix3Xd j = chain.point_jacobian(q, "d", Vec3(0.2, -0.1, 0.3));
    CHECK((j.col(1) - rotation_z(0.6) * Vec3::UnitX()).norm() < 1e-14);
  }
  SUBCASE("unknown link") {
    const KinematicChain chain = parse_urdf(planar_2r_urdf(), "base", "tool");
    CHECK_THROWS_AS(chain.point_jacobian(Eigen::Vector2d(0, 0), "nope", Vec3::Zero()), UrdfError);
  }
}

TEST_CASE("point jacobian matches finite differences of forward kinematics") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  double worst_abs = 0.0, worst_rel = 0.0;
  for (int sample = 0; sample < 100; ++sample) {
    const ChainFixture fx = random_chain(1000 + sample, 7, sample % 3 == 0);
    const KinematicChain chain = parse_urdf(fx.urdf, "base_link", "tool");
    const Eigen::VectorXd q = random_in_limits(fx.lower, fx.upper, sample);
    const std::string link = fx.link_names[1 + sample % (fx.link_names.size() - 1)];
    const Vec3 p(u(rng), u(rng), u(rng));
    const Eigen::Matrix3Xd j = chain.point_jacobian(q, link, p);
    for (int c = 0; c < 3; ++c) {
      const Eigen::VectorXd fd = numeric_gradient(
          [&](const Eigen::VectorXd& x) { return chain.forward_kinematics(x).at(link).apply(p)[c]; }, q);
      const Eigen::VectorXd row = j.row(c).transpose();
      worst_abs = std::max(worst_abs, (row - fd).lpNorm<Eigen::Infinity>());
      worst_rel = std::max(worst_rel, relative_error(row, fd));
    }
  }
  CHECK(worst_abs < 1e-5);
  CHECK(worst_rel < 1e-4);
}

TEST_CASE("bundled arm parses with seven joints") {
  const KinematicChain chain = load_urdf(arm7_urdf(), "base_link", "hand");
  CHECK(chain.dof() == 7);
  CHECK(chain.within_limits(arm7_ready()));
  const UrdfEndpoints ends = urdf_endpoints(R"(<robot name="r"><link name="a"/><link name="b"/>
    <joint name="j" type="fixed"><parent link="a"/><child link="b"/></joint></robot>)");
  CHECK(ends.root == "a");
  REQUIRE(ends.unique_leaf);
  CHECK(*ends.unique_leaf == "b");
}
