#include "hglance/objects.hpp"

#include <cmath>

#include "hglance/errors.hpp"

namespace hglance {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TriangleMesh make_cuboid(double hx, double hy, double hz) {
  TriangleMesh m;
  m.vertices = {
      {-hx, -hy, -hz}, {+hx, -hy, -hz}, {+hx, +hy, -hz}, {-hx, +hy, -hz},
      {-hx, -hy, +hz}, {+hx, -hy, +hz}, {+hx, +hy, +hz}, {-hx, +hy, +hz},
  };
  m.triangles = {
      {0, 2, 1}, {0, 3, 2},  // bottom
      {4, 5, 6}, {4, 6, 7},  // top
      {0, 1, 5}, {0, 5, 4},  // y = -hy
      {2, 3, 7}, {2, 7, 6},  // y = +hy
      {1, 2, 6}, {1, 6, 5},  // x = +hx
      {3, 0, 4}, {3, 4, 7},  // x = -hx
  };
  return m;
}

TriangleMesh make_hemisphere(double radius, int rings, int segments) {
  TriangleMesh m;
  const double z0 = -radius * 0.5;  // base plane; apex at +radius/2

  const int apex = 0;
  m.vertices.push_back({0.0, 0.0, z0 + radius});
  for (int i = 1; i <= rings; ++i) {
    const double phi = (kPi / 2.0) * static_cast<double>(i) / rings;
    const double rho = radius * std::sin(phi);
    const double z = z0 + radius * std::cos(phi);
    for (int s = 0; s < segments; ++s) {
      const double a = 2.0 * kPi * s / segments;
      m.vertices.push_back({rho * std::cos(a), rho * std::sin(a), z});
    }
  }
  const int base_center = static_cast<int>(m.vertices.size());
  m.vertices.push_back({0.0, 0.0, z0});

  auto ring_v = [&](int ring, int s) {  // ring is 1-based
    return 1 + (ring - 1) * segments + (s % segments);
  };

  for (int s = 0; s < segments; ++s)
    m.triangles.push_back({apex, ring_v(1, s), ring_v(1, s + 1)});
  for (int i = 1; i < rings; ++i) {
    for (int s = 0; s < segments; ++s) {
      const int a0 = ring_v(i, s), a1 = ring_v(i, s + 1);
      const int b0 = ring_v(i + 1, s), b1 = ring_v(i + 1, s + 1);
      m.triangles.push_back({a0, b0, b1});
      m.triangles.push_back({a0, b1, a1});
    }
  }
  for (int s = 0; s < segments; ++s)
    m.triangles.push_back({base_center, ring_v(rings, s + 1), ring_v(rings, s)});
  return m;
}

TriangleMesh make_triangular_prism(double hx, double hy, double hz) {
  TriangleMesh m;
  m.vertices = {
      {-hx, -hy, -hz},  // 0
      {+hx, -hy, -hz},  // 1
      {+hx, +hy, -hz},  // 2
      {-hx, +hy, -hz},  // 3
      {0.0, -hy, +hz},  // 4 ridge front
      {0.0, +hy, +hz},  // 5 ridge back
  };
  m.triangles = {
      {0, 2, 1}, {0, 3, 2},  // base
      {1, 2, 5}, {1, 5, 4},  // +x slope
      {3, 0, 4}, {3, 4, 5},  // -x slope
      {0, 1, 4},             // y = -hy end
      {2, 3, 5},             // y = +hy end
  };
  return m;
}

TriangleMesh make_cylinder(double radius, double hz, int segments) {
  TriangleMesh m;
  for (int s = 0; s < segments; ++s) {
    const double a = 2.0 * kPi * s / segments;
    m.vertices.push_back({radius * std::cos(a), radius * std::sin(a), +hz});
  }
  for (int s = 0; s < segments; ++s) {
    const double a = 2.0 * kPi * s / segments;
    m.vertices.push_back({radius * std::cos(a), radius * std::sin(a), -hz});
  }
  const int top_center = 2 * segments;
  const int bottom_center = 2 * segments + 1;
  m.vertices.push_back({0.0, 0.0, +hz});
  m.vertices.push_back({0.0, 0.0, -hz});

  auto top = [&](int s) { return s % segments; };
  auto bot = [&](int s) { return segments + (s % segments); };

  for (int s = 0; s < segments; ++s) {
    m.triangles.push_back({top(s), bot(s), bot(s + 1)});
    m.triangles.push_back({top(s), bot(s + 1), top(s + 1)});
  }
  for (int s = 0; s < segments; ++s)
    m.triangles.push_back({top_center, top(s), top(s + 1)});
  for (int s = 0; s < segments; ++s)
    m.triangles.push_back({bottom_center, bot(s + 1), bot(s)});
  return m;
}

std::vector<TriangleMesh> build_object_set() {
  std::vector<TriangleMesh> set;
  set.push_back(make_cuboid(kCuboidHalfX, kCuboidHalfY, kCuboidHalfZ));
  set.push_back(make_hemisphere(kHemisphereRadius, kHemisphereRings, kHemisphereSegments));
  set.push_back(make_triangular_prism(kPrismHalfX, kPrismHalfY, kPrismHalfZ));
  set.push_back(make_cylinder(kCylinderRadius, kCylinderHalfZ, kCylinderSegments));
  for (const auto& m : set) validate_mesh(m);
  return set;
}

const char* object_name(int object_id) {
  switch (object_id) {
    case 0: return "cuboid";
    case 1: return "hemisphere";
    case 2: return "prism";
    case 3: return "cylinder";
    default: throw IndexOutOfRange("object id out of range");
  }
}

}  // namespace hglance
