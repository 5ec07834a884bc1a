#ifndef HGLANCE_GEOMETRY_HPP_
#define HGLANCE_GEOMETRY_HPP_

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace hglance {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
};

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  Vec3 bbox_min() const;
  Vec3 bbox_max() const;
};

// Throws on out-of-range indices, degenerate triangles (area <= 1e-12) or
// non-finite coordinates.
void validate_mesh(const TriangleMesh& mesh);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

// Distance from p to the closest point of triangle (a,b,c).
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

// Minimal OBJ subset: `v x y z` and `f i j k` with 1-based indices, ASCII,
// LF line endings. Doubles are printed with enough digits to round-trip.
std::string mesh_to_obj(const TriangleMesh& mesh);
TriangleMesh mesh_from_obj(const std::string& text);

}  // namespace hglance

#endif  // HGLANCE_GEOMETRY_HPP_
