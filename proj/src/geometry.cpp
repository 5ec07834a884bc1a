#include "hglance/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "hglance/errors.hpp"

namespace hglance {

Vec3 TriangleMesh::bbox_min() const {
  Vec3 m{1e300, 1e300, 1e300};
  for (const Vec3& v : vertices) {
    m.x = std::min(m.x, v.x);
    m.y = std::min(m.y, v.y);
    m.z = std::min(m.z, v.z);
  }
  return m;
}

Vec3 TriangleMesh::bbox_max() const {
  Vec3 m{-1e300, -1e300, -1e300};
  for (const Vec3& v : vertices) {
    m.x = std::max(m.x, v.x);
    m.y = std::max(m.y, v.y);
    m.z = std::max(m.z, v.z);
  }
  return m;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

void validate_mesh(const TriangleMesh& mesh) {
  if (mesh.vertices.empty() || mesh.triangles.empty())
    throw Error("mesh has no geometry");
  const int n = static_cast<int>(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices)
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
      throw Error("mesh has non-finite vertex");
  for (const auto& t : mesh.triangles) {
    for (int i : t)
      if (i < 0 || i >= n) throw IndexOutOfRange("triangle index out of range");
    if (triangle_area(mesh.vertices[static_cast<std::size_t>(t[0])],
                      mesh.vertices[static_cast<std::size_t>(t[1])],
                      mesh.vertices[static_cast<std::size_t>(t[2])]) <= 1e-12)
      throw Error("degenerate triangle in mesh");
  }
}

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Ericson, Real-Time Collision Detection, closest point on triangle.
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return (p - a).norm();

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return (p - b).norm();

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double t = d1 / (d1 - d3);
    return (p - (a + ab * t)).norm();
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return (p - c).norm();

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double t = d2 / (d2 - d6);
    return (p - (a + ac * t)).norm();
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return (p - (b + (c - b) * t)).norm();
  }

  const double denom = 1.0 / (va + vb + vc);
  const Vec3 q = a + ab * (vb * denom) + ac * (vc * denom);
  return (p - q).norm();
}

std::string mesh_to_obj(const TriangleMesh& mesh) {
  std::string out;
  char buf[128];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
    out += buf;
  }
  for (const auto& t : mesh.triangles) {
    std::snprintf(buf, sizeof(buf), "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
    out += buf;
  }
  return out;
}

TriangleMesh mesh_from_obj(const std::string& text) {
  TriangleMesh mesh;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v.x >> v.y >> v.z))
        throw Error("obj line " + std::to_string(lineno) + ": bad vertex");
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      int i, j, k;
      if (!(ls >> i >> j >> k))
        throw Error("obj line " + std::to_string(lineno) + ": bad face");
      mesh.triangles.push_back({i - 1, j - 1, k - 1});
    } else {
      throw Error("obj line " + std::to_string(lineno) + ": unsupported tag '" + tag + "'");
    }
  }
  validate_mesh(mesh);
  return mesh;
}

}  // namespace hglance
