#include "hglance/sim.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "hglance/errors.hpp"
#include "hglance/objects.hpp"

namespace hglance {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

Vec3 rotate_xyz(const Vec3& v, const Vec3& rot_deg) {
  const double ax = rot_deg.x * kDegToRad;
  const double ay = rot_deg.y * kDegToRad;
  const double az = rot_deg.z * kDegToRad;
  // R_x first
  Vec3 p{v.x, std::cos(ax) * v.y - std::sin(ax) * v.z,
         std::sin(ax) * v.y + std::cos(ax) * v.z};
  // then R_y
  p = {std::cos(ay) * p.x + std::sin(ay) * p.z, p.y,
       -std::sin(ay) * p.x + std::cos(ay) * p.z};
  // then R_z
  return {std::cos(az) * p.x - std::sin(az) * p.y,
          std::sin(az) * p.x + std::cos(az) * p.y, p.z};
}

}  // namespace

std::string scene_to_record(const Scene& s) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d %.17g %.17g %.17g %.17g %.17g %.17g",
                s.object_id, s.position.x, s.position.y, s.position.z,
                s.rotation.x, s.rotation.y, s.rotation.z);
  return buf;
}

Scene scene_from_record(const std::string& line) {
  Scene s;
  std::istringstream in(line);
  if (!(in >> s.object_id >> s.position.x >> s.position.y >> s.position.z >>
        s.rotation.x >> s.rotation.y >> s.rotation.z))
    throw Error("bad scene record: " + line);
  return s;
}

ProbeRequest action_to_probe(const std::array<double, 4>& a) {
  for (double c : a)
    if (!(c >= -1.0 && c <= 1.0))
      throw Error("action component outside [-1,1]");
  const Vec3 raw{a[1], a[2], -(0.2 + 0.8 * (a[3] + 1.0) / 2.0)};
  const double n = raw.norm();
  if (n < 1e-9) throw DegenerateDirection("zero-length probe direction");
  ProbeRequest p;
  p.py = a[0];
  p.u = raw * (1.0 / n);
  return p;
}

World::World(SimConfig cfg) : cfg_(cfg), objects_(build_object_set()) {}

Scene World::place_scene(int object_id, const Vec3& position, const Vec3& rotation) const {
  if (object_id < 0 || object_id >= static_cast<int>(objects_.size()))
    throw IndexOutOfRange("object id out of range");
  if (std::abs(rotation.x) > kRotXYMaxDeg || std::abs(rotation.y) > kRotXYMaxDeg)
    throw PoseOutOfWorkspace("R_x/R_y outside [-10, 10] degrees");
  if (std::abs(rotation.z) > kRotZMaxDeg)
    throw PoseOutOfWorkspace("R_z outside [-180, 180] degrees");

  Scene s{object_id, position, rotation};
  for (const Vec3& v : objects_[static_cast<std::size_t>(object_id)].vertices) {
    const Vec3 w = rotate_xyz(v, rotation) + position;
    if (w.z >= 0.0)
      throw PoseOutOfWorkspace("placed mesh reaches the surface plane");
    if (std::abs(w.x) > kWorkspaceAbsMax || std::abs(w.y) > kWorkspaceAbsMax)
      throw PoseOutOfWorkspace("placed mesh leaves the workspace");
  }
  return s;
}

bool World::pose_in_test_region(const Scene& s) const {
  const bool rz_held = s.rotation.z >= cfg_.test_rz_min && s.rotation.z <= cfg_.test_rz_max;
  const bool x_held = s.position.x >= cfg_.test_x_min && s.position.x <= cfg_.test_x_max;
  return rz_held || x_held;
}

Scene World::sample_scene(Rng& rng, Split split) const {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int object_id = static_cast<int>(rng.uniform_index(objects_.size()));
    Vec3 pos{rng.uniform(-cfg_.xy_init_absmax, cfg_.xy_init_absmax),
             rng.uniform(-cfg_.xy_init_absmax, cfg_.xy_init_absmax),
             rng.uniform(cfg_.z_init_min, cfg_.z_init_max)};
    Vec3 rot{rng.uniform(-kRotXYMaxDeg, kRotXYMaxDeg),
             rng.uniform(-kRotXYMaxDeg, kRotXYMaxDeg), 0.0};
    if (split == Split::Test) {
      rot.z = rng.uniform(cfg_.test_rz_min, cfg_.test_rz_max);
    } else {
      rot.z = rng.uniform(-kRotZMaxDeg, kRotZMaxDeg);
    }
    Scene candidate{object_id, pos, rot};
    if (split == Split::Train && pose_in_test_region(candidate)) continue;
    try {
      return place_scene(object_id, pos, rot);
    } catch (const PoseOutOfWorkspace&) {
      continue;
    }
  }
  throw Error("sample_scene: no admissible pose after 1000 attempts");
}

TriangleMesh World::placed_mesh(const Scene& scene) const {
  TriangleMesh m = objects_[static_cast<std::size_t>(scene.object_id)];
  for (Vec3& v : m.vertices) v = rotate_xyz(v, scene.rotation) + scene.position;
  return m;
}

double ray_triangle_intersect(const Vec3& origin, const Vec3& dir,
                              const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a, e2 = c - a;
  const Vec3 pvec = dir.cross(e2);
  const double det = e1.dot(pvec);
  if (det > -1e-9 && det < 1e-9) return -1.0;
  const double inv = 1.0 / det;
  const Vec3 tvec = origin - a;
  const double u = tvec.dot(pvec) * inv;
  if (u < 0.0 || u > 1.0) return -1.0;
  const Vec3 qvec = tvec.cross(e1);
  const double v = dir.dot(qvec) * inv;
  if (v < 0.0 || u + v > 1.0) return -1.0;
  return e2.dot(qvec) * inv;
}

CollectedPoint World::ray_cast(const TriangleMesh& placed, const ProbeRequest& probe) const {
  const Vec3 origin{cfg_.px_const, probe.py, 0.0};
  const Vec3& dir = probe.u;

  double best_t = -1.0;
  const auto& tris = placed.triangles;
  for (std::size_t i = 0; i < tris.size(); ++i) {
    const double t = ray_triangle_intersect(
        origin, dir, placed.vertices[static_cast<std::size_t>(tris[i][0])],
        placed.vertices[static_cast<std::size_t>(tris[i][1])],
        placed.vertices[static_cast<std::size_t>(tris[i][2])]);
    if (t <= 0.0 || t > cfg_.u_len_max) continue;
    // strict < keeps the lowest triangle index on equal-t ties
    if (best_t < 0.0 || t < best_t) best_t = t;
  }

  CollectedPoint out;
  if (best_t > 0.0) {
    const Vec3 hit = origin + dir * best_t;
    out = {hit.x, hit.y, hit.z, 1};
  } else {
    const Vec3 end = origin + dir * cfg_.u_len_max;
    out = {end.x, end.y, end.z, 0};
  }
  return out;
}

CollectedPoint World::ray_cast(const Scene& scene, const ProbeRequest& probe) const {
  return ray_cast(placed_mesh(scene), probe);
}

}  // namespace hglance
