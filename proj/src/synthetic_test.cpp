#include "pcgrasp/synthetic.hpp"

#include "fixtures.hpp"

#include "doctest.h"

#include <algorithm>

using namespace pcgrasp;
using namespace pcgrasp::testing;

namespace {

bool on_box_surface(const Box& b, const Vec3& p, double tol = 1e-9) {
  if (!Box{b.lo - Vec3::Constant(tol), b.hi + Vec3::Constant(tol)}.contains(p)) return false;
  for (int a = 0; a < 3; ++a)
    if (std::abs(p[a] - b.lo[a]) < tol || std::abs(p[a] - b.hi[a]) < tol) return true;
  return false;
}

Vec3 grasp_centre(const RigidTransform& pose) { return pose.translation + 0.10 * pose.rotation.col(2); }

}  // namespace

TEST_CASE("scene kind names") {
  for (auto k : {SceneKind::tabletop, SceneKind::shelf, SceneKind::custom})
    CHECK(parse_scene_kind(scene_kind_name(k)) == k);
  CHECK_THROWS_AS(parse_scene_kind("kitchen"), std::invalid_argument);
  CHECK_THROWS_AS(make_scene_spec(SceneKind::custom, 0), std::invalid_argument);
}

TEST_CASE("layouts are deterministic in the seed") {
  for (auto kind : {SceneKind::tabletop, SceneKind::shelf}) {
    const SceneSpec a = make_scene_spec(kind, 4), b = make_scene_spec(kind, 4), c = make_scene_spec(kind, 5);
    REQUIRE(a.boxes.size() == b.boxes.size());
    for (std::size_t i = 0; i < a.boxes.size(); ++i) {
      CHECK(a.boxes[i].lo == b.boxes[i].lo);
      CHECK(a.boxes[i].hi == b.boxes[i].hi);
    }
    REQUIRE(a.goals.size() == b.goals.size());
    for (std::size_t i = 0; i < a.goals.size(); ++i) CHECK(a.goals[i].translation == b.goals[i].translation);
    CHECK(a.goals[0].translation != c.goals[0].translation);

    const SyntheticScene s1 = generate_scene(a, 4), s2 = generate_scene(a, 4);
    REQUIRE(s1.cloud.points.size() == s2.cloud.points.size());
    CHECK(std::equal(s1.cloud.points.begin(), s1.cloud.points.end(), s2.cloud.points.begin()));
    CHECK(s1.depth.depth == s2.depth.depth);
  }
}

TEST_CASE("tabletop goals sit above the table and clear of the obstacles") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SceneSpec s = make_scene_spec(SceneKind::tabletop, seed);
    CHECK(s.standoff_offset == 0.10);
    const double table_top = s.boxes[0].hi.z();
    REQUIRE_FALSE(s.intended_feasible.empty());
    for (int i : s.intended_feasible) {
      const RigidTransform& g = s.goals[i];
      CHECK(g.orthonormality_error() < 1e-12);
      CHECK(grasp_centre(g).z() > table_top);
      // Approach from above.
      CHECK(g.rotation.col(2).z() < -0.99);
      for (const auto& b : s.boxes) {
        CHECK_FALSE(b.contains(g.translation));
        CHECK_FALSE(b.contains(grasp_centre(g)));
      }
    }
    // The first decoy is buried in an obstacle.
    const auto decoy = std::find_if(s.goals.begin(), s.goals.end(), [&](const RigidTransform& g) {
      return std::none_of(s.intended_feasible.begin(), s.intended_feasible.end(),
                          [&](int i) { return s.goals[i].translation == g.translation; });
    });
    REQUIRE(decoy != s.goals.end());
    CHECK(std::any_of(s.boxes.begin() + 1, s.boxes.end(), [&](const Box& b) { return b.contains(decoy->translation); }));
  }
}

TEST_CASE("shelf goals lie between the shelf planes") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SceneSpec s = make_scene_spec(SceneKind::shelf, seed);
    CHECK(s.standoff_offset == 0.20);
    const double bottom = s.boxes[0].hi.z(), top = s.boxes[1].lo.z();
    const double back = s.boxes[2].lo.x(), left = s.boxes[3].hi.y(), right = s.boxes[4].lo.y();
    CHECK(top > bottom);
    for (int i : s.intended_feasible) {
      const Vec3 c = grasp_centre(s.goals[i]);
      CHECK(c.z() > bottom);
      CHECK(c.z() < top);
      CHECK(c.x() < back);
      CHECK(c.y() > left);
      CHECK(c.y() < right);
      // Reaching forward into the shelf.
      CHECK(s.goals[i].rotation.col(2).x() > 0.5);
    }
  }
}

TEST_CASE("cloud samples lie on box surfaces") {
  const SceneSpec spec = make_scene_spec(SceneKind::tabletop, 2);
  const SyntheticScene s = generate_scene(spec, 2);
  REQUIRE(s.cloud.points.size() > 1000);
  for (const auto& p : s.cloud.points)
    CHECK(std::any_of(spec.boxes.begin(), spec.boxes.end(), [&](const Box& b) { return on_box_surface(b, p); }));
  CHECK(s.cloud.source != nullptr);
}

TEST_CASE("rendered depth") {
  SUBCASE("looking straight down at a slab") {
    CameraSpec cam;
    cam.position = Vec3(0.0, 0.0, 1.0);
    cam.look_at = Vec3(0.0, 0.0, 0.0);
    cam.width = 41;
    cam.height = 31;
    cam.focal = 30.0;
    const Box slab{Vec3(-0.5, -0.5, -0.1), Vec3(0.5, 0.5, 0.2)};
    const DepthImage d = render_depth({slab}, cam);
    // Centre pixel ray hits the slab top at depth 0.8.
    CHECK(d.at(20, 15) == doctest::Approx(0.8).epsilon(1e-12));
    // Every hit back-projects onto the slab top.
    for (const auto& p : backproject(d).points) CHECK(std::abs(p.z() - 0.2) < 1e-9);
  }
  SUBCASE("misses are zero") {
    CameraSpec cam;
    const Box away{Vec3(-5.0, -5.0, 5.0), Vec3(-4.0, -4.0, 6.0)};
    const DepthImage d = render_depth({away}, cam);
    CHECK(std::all_of(d.depth.begin(), d.depth.end(), [](double v) { return v == 0.0; }));
  }
  SUBCASE("camera frame convention") {
    CameraSpec cam;
    const RigidTransform e = cam.extrinsics();
    CHECK(e.orthonormality_error() < 1e-12);
    CHECK((e.rotation.col(2) - (cam.look_at - cam.position).normalized()).norm() < 1e-12);
    // Image +y points downward in the world.
    CHECK(e.rotation.col(1).z() < 0.0);
  }
}

TEST_CASE("scene spec files") {
  TempDir dir;
  write_text(dir / "s.json", R"({"boxes": [{"lo": [0.3, -0.1, 0.0], "hi": [0.5, 0.1, 0.2]}],
    "camera": {"position": [0, 0, 1], "look_at": [0.4, 0, 0], "width": 64, "height": 48, "focal": 50},
    "density": 1000, "standoff_offset": 0.15,
    "goals": [{"pose": [1,0,0,0.4, 0,-1,0,0, 0,0,-1,0.4, 0,0,0,1]}], "note": "ignored"})");
  const SceneSpec s = read_scene_spec(dir / "s.json");
  CHECK(s.kind == SceneKind::custom);
  REQUIRE(s.boxes.size() == 1);
  CHECK(s.boxes[0].hi == Vec3(0.5, 0.1, 0.2));
  CHECK(s.camera.width == 64);
  CHECK(s.camera.focal == 50.0);
  CHECK(s.density == 1000.0);
  CHECK(s.standoff_offset == 0.15);
  REQUIRE(s.goals.size() == 1);
  CHECK(s.goals[0].translation == Vec3(0.4, 0.0, 0.4));
  CHECK(s.intended_feasible == std::vector<int>{0});
  CHECK_NOTHROW(generate_scene(s, 0));

  auto bad = [&](const std::string& text) {
    write_text(dir / "bad.json", text);
    CHECK_THROWS(read_scene_spec(dir / "bad.json"));
  };
  bad("{not json");
  bad(R"({"boxes": []})");
  bad(R"({"camera": {}})");
  bad(R"({"boxes": [{"lo": [1, 0, 0], "hi": [0, 1, 1]}]})");
  bad(R"({"boxes": [{"lo": [0, 0], "hi": [1, 1, 1]}]})");
  bad(R"({"boxes": [{"lo": [0, 0, 0], "hi": [1, 1, 1]}], "density": 0})");
  bad(R"({"boxes": [{"lo": [0, 0, 0], "hi": [1, 1, 1]}], "goals": [{"pose": [1, 2, 3]}]})");
  bad(R"({"boxes": [{"lo": [0, 0, 0], "hi": [1, 1, 1]}], "goals": [{"pose": [2,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]}]})");
  CHECK_THROWS(read_scene_spec(dir / "missing.json"));

  SceneSpec empty;
  CHECK_THROWS_AS(generate_scene(empty, 0), std::invalid_argument);
}
