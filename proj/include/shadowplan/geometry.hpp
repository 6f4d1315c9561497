#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace shadowplan {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned box used for domain bounds.
struct Aabb {
  Vec3 min{Vec3::Zero()};
  Vec3 max{Vec3::Zero()};

  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
};

/**
 * Shadow region lifted into a super-ellipsoid volume.
 *
 * The implicit field is
 *   Γ(P) = (x'/λa·a)^2p + (y'/λb·b)^2q + (z'/λc·c)^2r
 * where (x', y', z') is P expressed in the obstacle frame: translated to the
 * center and rotated by -yaw about the vertical axis. Γ <= 1 is inside.
 */
struct SuperEllipsoidObstacle {
  Vec3 center{Vec3::Zero()};
  double a{1.0};
  double b{1.0};
  double c{1.0};
  int p{1};
  int q{1};
  int r{1};
  double inflate_a{1.0};
  double inflate_b{1.0};
  double inflate_c{1.0};
  double yaw{0.0};
  /// Motion of the shadow, used as v_P by the flow modulation.
  Vec3 velocity{Vec3::Zero()};

  /// Throws shadowplan::Error when an invariant is violated.
  void validate() const;
};

inline constexpr int kMaxShapeExponent = 4;
/// Per-term base ratios are clamped to this magnitude before exponentiation.
inline constexpr double kMaxBaseRatio = 1e6;

double gamma_value(const Vec3& point, const SuperEllipsoidObstacle& obs);

/// Analytic ∇Γ. Zero at the exact center.
Vec3 gamma_gradient(const Vec3& point, const SuperEllipsoidObstacle& obs);

/// True iff Γ_w(P) > 1 for every obstacle.
bool is_feasible(const Vec3& point, std::span<const SuperEllipsoidObstacle> obstacles);

struct NearestObstacle {
  double gamma{0.0};
  std::size_t index{0};
};

/// Smallest Γ and its index, ties resolved to the lowest index.
/// Throws on an empty list.
NearestObstacle min_gamma(const Vec3& point, std::span<const SuperEllipsoidObstacle> obstacles);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

}  // namespace shadowplan
