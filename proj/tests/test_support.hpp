#ifndef HGLANCE_TESTS_TEST_SUPPORT_HPP_
#define HGLANCE_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>

#include "hglance/sim.hpp"

namespace hglance::testsupport {

// Undirected edge -> incident triangle count. Watertight meshes have every
// edge on exactly two triangles.
inline std::map<std::pair<int, int>, int> edge_counts(const TriangleMesh& mesh) {
  std::map<std::pair<int, int>, int> counts;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      int a = t[static_cast<std::size_t>(e)];
      int b = t[static_cast<std::size_t>((e + 1) % 3)];
      if (a > b) std::swap(a, b);
      counts[{a, b}] += 1;
    }
  }
  return counts;
}

inline bool mesh_closed(const TriangleMesh& mesh) {
  for (const auto& [edge, n] : edge_counts(mesh))
    if (n != 2) return false;
  return true;
}

// Parity-based point containment for watertight meshes: count crossings of
// an upward ray. Independent of the production ray_cast path (used only as
// an oracle).
inline bool point_in_mesh(const TriangleMesh& mesh, const Vec3& p) {
  const Vec3 up{0.0, 0.0, 1.0};
  int crossings = 0;
  for (const auto& t : mesh.triangles) {
    const double hit = ray_triangle_intersect(
        p, up, mesh.vertices[static_cast<std::size_t>(t[0])],
        mesh.vertices[static_cast<std::size_t>(t[1])],
        mesh.vertices[static_cast<std::size_t>(t[2])]);
    if (hit > 0.0) ++crossings;
  }
  return (crossings % 2) == 1;
}

struct MarchResult {
  bool hit = false;
  double t = 0.0;  // first sampled ray parameter found inside the mesh
};

// Marches t in fixed steps through the ray-bbox overlap and reports the
// first sample strictly inside the mesh.
inline MarchResult march_ray(const TriangleMesh& mesh, const Vec3& origin, const Vec3& dir,
                             double t_max, double step) {
  const Vec3 lo = mesh.bbox_min();
  const Vec3 hi = mesh.bbox_max();

  double enter = 0.0, exit = t_max;
  const double o[3] = {origin.x, origin.y, origin.z};
  const double d[3] = {dir.x, dir.y, dir.z};
  const double l[3] = {lo.x, lo.y, lo.z};
  const double h[3] = {hi.x, hi.y, hi.z};
  for (int axis = 0; axis < 3; ++axis) {
    if (d[axis] == 0.0) {
      if (o[axis] < l[axis] || o[axis] > h[axis]) return {};
      continue;
    }
    double t0 = (l[axis] - o[axis]) / d[axis];
    double t1 = (h[axis] - o[axis]) / d[axis];
    if (t0 > t1) std::swap(t0, t1);
    enter = std::max(enter, t0);
    exit = std::min(exit, t1);
  }
  if (enter > exit) return {};

  const std::int64_t first = static_cast<std::int64_t>(enter / step);
  const std::int64_t last = static_cast<std::int64_t>(exit / step) + 1;
  for (std::int64_t i = std::max<std::int64_t>(first, 1); i <= last; ++i) {
    const double t = static_cast<double>(i) * step;
    if (t > t_max) break;
    const Vec3 p = origin + dir * t;
    if (point_in_mesh(mesh, p)) return {true, t};
  }
  return {};
}

}  // namespace hglance::testsupport

#endif  // HGLANCE_TESTS_TEST_SUPPORT_HPP_
