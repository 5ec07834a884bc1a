#ifndef HGLANCE_OBJECTS_HPP_
#define HGLANCE_OBJECTS_HPP_

#include <vector>

#include "hglance/geometry.hpp"

namespace hglance {

// Canonical object dimensions (workspace units). Objects are centred at the
// origin and kept within a 0.8-unit extent so any sampled pose stays inside
// the workspace. Top-surface profiles are mutually distinguishable: a wide
// flat plateau, a dome, a sloped ridge and a small flat disk.
inline constexpr int kNumObjects = 4;
inline constexpr double kCuboidHalfX = 0.4;
inline constexpr double kCuboidHalfY = 0.4;
inline constexpr double kCuboidHalfZ = 0.2;
inline constexpr double kHemisphereRadius = 0.4;
inline constexpr int kHemisphereRings = 4;
inline constexpr int kHemisphereSegments = 16;
inline constexpr double kPrismHalfX = 0.4;
inline constexpr double kPrismHalfY = 0.4;
inline constexpr double kPrismHalfZ = 0.2;
inline constexpr double kCylinderRadius = 0.3;
inline constexpr double kCylinderHalfZ = 0.15;
inline constexpr int kCylinderSegments = 32;

TriangleMesh make_cuboid(double hx, double hy, double hz);
TriangleMesh make_hemisphere(double radius, int rings, int segments);
TriangleMesh make_triangular_prism(double hx, double hy, double hz);
TriangleMesh make_cylinder(double radius, double hz, int segments);

// The four-object set: cuboid, hemisphere, triangular prism, cylinder.
std::vector<TriangleMesh> build_object_set();

const char* object_name(int object_id);

}  // namespace hglance

#endif  // HGLANCE_OBJECTS_HPP_
