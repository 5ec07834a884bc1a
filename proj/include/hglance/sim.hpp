#ifndef HGLANCE_SIM_HPP_
#define HGLANCE_SIM_HPP_

#include <array>
#include <string>
#include <vector>

#include "hglance/geometry.hpp"
#include "hglance/rng.hpp"

namespace hglance {

inline constexpr double kWorkspaceAbsMax = 1.0;  // |x|,|y| bound for placed meshes
inline constexpr double kRotXYMaxDeg = 10.0;
inline constexpr double kRotZMaxDeg = 180.0;

// Simulator constants and pose-sampling ranges; every value is configurable
// through the run config.
struct SimConfig {
  double px_const = 0.0;     // fixed x of the probe line
  double u_len_max = 3.0;    // sensor reach along the ray
  double xy_init_absmax = 0.3;
  double z_init_min = -1.0;
  double z_init_max = -0.6;
  // Held-out pose bands: the test split draws R_z inside [test_rz_min,
  // test_rz_max]; the train split rejects any pose with R_z in that band or
  // X_init in [test_x_min, test_x_max].
  double test_rz_min = 30.0;
  double test_rz_max = 60.0;
  double test_x_min = 0.2;
  double test_x_max = 0.3;
};

enum class Split { Train, Test };

struct Scene {
  int object_id = 0;
  Vec3 position;  // (X_init, Y_init, Z_init)
  Vec3 rotation;  // (R_x, R_y, R_z) degrees
};

std::string scene_to_record(const Scene& s);  // "object_id x y z rx ry rz"
Scene scene_from_record(const std::string& line);

struct ProbeRequest {
  double py = 0.0;                       // entry ordinate on the probe line
  Vec3 u{0.0, 0.0, -1.0};                // unit direction, u.z < 0

  std::array<double, 4> as_row() const { return {py, u.x, u.y, u.z}; }
};

struct CollectedPoint {
  double x = 0.0, y = 0.0, z = 0.0;
  int touched = 0;  // T flag

  std::array<double, 4> as_row() const { return {x, y, z, static_cast<double>(touched)}; }
};

// Maps a policy action in [-1,1]^4 onto a probe: Py = a0 and the direction
// is (a1, a2, -(0.2 + 0.8*(a3+1)/2)) normalized, which keeps u.z strictly
// negative for every admissible action.
ProbeRequest action_to_probe(const std::array<double, 4>& a);

// Owns the object set and answers pose placement and ray casts.
class World {
 public:
  explicit World(SimConfig cfg);

  const SimConfig& config() const { return cfg_; }
  const std::vector<TriangleMesh>& objects() const { return objects_; }

  // Validates rotation ranges and the placed-mesh workspace invariants
  // (entirely below z = 0, |x|,|y| <= 1); throws PoseOutOfWorkspace.
  Scene place_scene(int object_id, const Vec3& position, const Vec3& rotation) const;

  // Uniform object id and pose inside the split's ranges; resamples poses
  // rejected by place_scene (hard error after 1000 attempts).
  Scene sample_scene(Rng& rng, Split split) const;

  bool pose_in_test_region(const Scene& s) const;

  // Rotate R_x then R_y then R_z (extrinsic), then translate.
  TriangleMesh placed_mesh(const Scene& scene) const;

  // Nearest ray-mesh intersection with ray parameter in (0, u_len_max];
  // misses return the ray endpoint at u_len_max with T = 0.
  CollectedPoint ray_cast(const TriangleMesh& placed, const ProbeRequest& probe) const;
  CollectedPoint ray_cast(const Scene& scene, const ProbeRequest& probe) const;

 private:
  SimConfig cfg_;
  std::vector<TriangleMesh> objects_;
};

// Moller-Trumbore with a 1e-9 epsilon on the determinant. Returns the ray
// parameter t of the hit or a negative value on miss.
double ray_triangle_intersect(const Vec3& origin, const Vec3& dir,
                              const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace hglance

#endif  // HGLANCE_SIM_HPP_
