#pragma once

#include "shadowplan/geometry.hpp"

#include <span>
#include <vector>

namespace shadowplan {

/// Instantaneous cross-section of one shadow blob on the water surface.
struct BlobState {
  double x{0.0};
  double y{0.0};
  double a{1.0};
  double b{1.0};
  double yaw{0.0};
  int exponent{1};

  /// |x'/a|^2e + |y'/b|^2e <= 1 in the blob frame.
  bool contains(double px, double py) const;
  /// Radius of the smallest centered circle enclosing the super-ellipse.
  double circumscribed_radius() const;
};

/// Motion model of a blob: linear drift plus sinusoidal wobble of the center
/// and sinusoidal pulsation of both semi-axes.
struct ShadowBlob {
  double x0{0.0};
  double y0{0.0};
  double vx{0.0};
  double vy{0.0};
  double wobble_amplitude{0.0};
  double wobble_omega{0.0};
  double wobble_phase{0.0};
  double a0{1.0};
  double b0{1.0};
  double yaw{0.0};
  int exponent{1};
  double pulse_fraction{0.0};
  double pulse_omega{0.0};
  double pulse_phase{0.0};

  BlobState at(double t) const;
  /// Upper bound on center speed (m/s).
  double max_center_speed() const;
  /// Upper bound on the rate of change of either semi-axis (m/s).
  double max_axis_rate() const;
};

/// Horizontal shadow query at a frozen instant.
class ShadowMap {
 public:
  virtual ~ShadowMap() = default;
  virtual bool shadowed(double x, double y) const = 0;
};

/// Ground-truth shadows from the generator.
class BlobShadowMap final : public ShadowMap {
 public:
  explicit BlobShadowMap(std::vector<BlobState> blobs);
  bool shadowed(double x, double y) const override;
  const std::vector<BlobState>& blobs() const { return blobs_; }

 private:
  std::vector<BlobState> blobs_;
  std::vector<double> reach_sq_;
};

/// Shadows implied by the horizontal footprint (uninflated) of obstacle estimates.
class ObstacleShadowMap final : public ShadowMap {
 public:
  explicit ObstacleShadowMap(std::span<const SuperEllipsoidObstacle> obstacles);
  bool shadowed(double x, double y) const override;

 private:
  std::span<const SuperEllipsoidObstacle> obstacles_;
  std::vector<double> reach_sq_;
};

}  // namespace shadowplan
