#pragma once

#include "shadowplan/geometry.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace shadowplan {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat4 = Eigen::Matrix4d;

/// Constant-velocity track of one shadow: state is
/// (x, y, z, radius, vx, vy, vz, radius rate).
struct ObstacleTrackState {
  Vec8 mean{Vec8::Zero()};
  Mat8 covariance{Mat8::Identity()};
  Mat8 process_noise{Mat8::Zero()};
  Mat4 observation_noise{Mat4::Identity()};
};

struct TrackObservation {
  Vec3 center{Vec3::Zero()};
  double radius{1.0};
};

struct TrackNoise {
  /// white-noise acceleration spectral density of the center (m/s^2)
  double accel_sigma{0.5};
  /// same for the radius
  double radius_accel_sigma{0.3};
  /// observation standard deviation of each center axis (m)
  double center_sigma{0.5};
  double radius_sigma{0.5};
};

inline constexpr double kMinTrackRadius = 0.1;

/// Discrete white-noise-acceleration process covariance for step dt.
Mat8 process_noise_for(const TrackNoise& noise, double dt);
Mat4 observation_noise_for(const TrackNoise& noise);

/// New track at the observed position, zero rates, broad rate uncertainty.
ObstacleTrackState init_track(const TrackObservation& obs, const TrackNoise& noise, double dt);

ObstacleTrackState ekf_predict(const ObstacleTrackState& track, double dt);
ObstacleTrackState ekf_update(const ObstacleTrackState& track, const TrackObservation& obs);

/// Normalized innovation squared of `obs` against the track's prediction.
double innovation_nis(const ObstacleTrackState& track, const TrackObservation& obs);

/// Geometry used when a track is turned into an obstacle.
struct ObstacleShape {
  double thickness{10.0};
  double inflation{1.1};
};

SuperEllipsoidObstacle track_to_obstacle(const ObstacleTrackState& track, const ObstacleShape& shape);

/// Mean-only roll-forward of every track. Element i holds the obstacles
/// i steps ahead, i = 0..horizon.
std::vector<std::vector<SuperEllipsoidObstacle>> predict_obstacles(std::span<const ObstacleTrackState> tracks,
                                                                   int horizon, double dt,
                                                                   const ObstacleShape& shape);

}  // namespace shadowplan
