#pragma once

#include "shadowplan/geometry.hpp"

#include <vector>

namespace shadowplan {

/**
 * River centerline: a Catmull-Rom spline through the control points,
 * resampled into a dense polyline with cumulative arc length.
 *
 * All projections are horizontal; z of the query point is ignored and the
 * returned centerline points carry the water-surface elevation.
 */
class Centerline {
 public:
  struct Projection {
    double station{0.0};      ///< arc length of the foot point
    Vec3 point{Vec3::Zero()};  ///< foot point on the centerline
    Vec3 tangent{Vec3::UnitX()};
    Vec3 left{Vec3::UnitY()};  ///< horizontal unit normal, pointing left of the tangent
    double cross_track{0.0};   ///< signed offset, positive to the left
  };

  Centerline() = default;
  explicit Centerline(std::vector<Vec3> control_points, double spacing = 1.0);

  Projection project(const Vec3& p) const;
  Vec3 point_at(double station) const;
  Vec3 tangent_at(double station) const;

  double length() const { return stations_.empty() ? 0.0 : stations_.back(); }
  const std::vector<Vec3>& control_points() const { return control_; }
  const std::vector<Vec3>& polyline() const { return points_; }

 private:
  std::size_t segment_at(double station) const;
  double segment_distance_sq(std::size_t seg, const Vec3& p, double* t_out) const;

  std::vector<Vec3> control_;
  std::vector<Vec3> points_;
  std::vector<double> stations_;
};

}  // namespace shadowplan
