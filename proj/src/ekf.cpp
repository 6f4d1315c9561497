#include "shadowplan/ekf.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace shadowplan {

namespace {

using Mat48 = Eigen::Matrix<double, 4, 8>;

Mat8 transition(double dt) {
  Mat8 f = Mat8::Identity();
  f.topRightCorner<4, 4>() = dt * Mat4::Identity();
  return f;
}

Mat48 observation_matrix() {
  Mat48 h = Mat48::Zero();
  h.leftCols<4>() = Mat4::Identity();
  return h;
}

Eigen::Vector4d as_vector(const TrackObservation& obs) {
  return {obs.center.x(), obs.center.y(), obs.center.z(), obs.radius};
}

}  // namespace

Mat8 process_noise_for(const TrackNoise& noise, double dt) {
  Mat8 q = Mat8::Zero();
  const double q11 = dt * dt * dt * dt / 4.0;
  const double q12 = dt * dt * dt / 2.0;
  const double q22 = dt * dt;
  for (int i = 0; i < 4; ++i) {
    const double s2 = i < 3 ? noise.accel_sigma * noise.accel_sigma : noise.radius_accel_sigma * noise.radius_accel_sigma;
    q(i, i) = q11 * s2;
    q(i, i + 4) = q(i + 4, i) = q12 * s2;
    q(i + 4, i + 4) = q22 * s2;
  }
  return q;
}

Mat4 observation_noise_for(const TrackNoise& noise) {
  Mat4 r = Mat4::Zero();
  const double c2 = noise.center_sigma * noise.center_sigma;
  r.diagonal() << c2, c2, c2, noise.radius_sigma * noise.radius_sigma;
  return r;
}

ObstacleTrackState init_track(const TrackObservation& obs, const TrackNoise& noise, double dt) {
  ObstacleTrackState t;
  t.mean.head<4>() = as_vector(obs);
  t.mean(3) = std::max(kMinTrackRadius, t.mean(3));
  t.process_noise = process_noise_for(noise, dt);
  t.observation_noise = observation_noise_for(noise);
  t.covariance = Mat8::Zero();
  t.covariance.topLeftCorner<4, 4>() = t.observation_noise;
  // shadows drift at a few m/s at most
  t.covariance.bottomRightCorner<4, 4>() = 4.0 * Mat4::Identity();
  return t;
}

ObstacleTrackState ekf_predict(const ObstacleTrackState& track, double dt) {
  if (!(dt > 0.0)) throw Error("ekf_predict: dt must be positive");
  const Mat8 f = transition(dt);
  ObstacleTrackState out = track;
  out.mean = f * track.mean;
  out.mean(3) = std::max(kMinTrackRadius, out.mean(3));
  out.covariance = f * track.covariance * f.transpose() + track.process_noise;
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  return out;
}

ObstacleTrackState ekf_update(const ObstacleTrackState& track, const TrackObservation& obs) {
  const Mat48 h = observation_matrix();
  const Eigen::Vector4d innovation = as_vector(obs) - h * track.mean;
  const Mat4 s = h * track.covariance * h.transpose() + track.observation_noise;
  const Eigen::FullPivLU<Mat4> lu(s);
  if (!lu.isInvertible() || !(std::abs(lu.determinant()) > 1e-300)) throw Error("singular innovation");
  const Eigen::Matrix<double, 8, 4> gain = track.covariance * h.transpose() * lu.inverse();

  ObstacleTrackState out = track;
  out.mean = track.mean + gain * innovation;
  out.mean(3) = std::max(kMinTrackRadius, out.mean(3));
  // Joseph form keeps the covariance symmetric positive semidefinite
  const Mat8 ikh = Mat8::Identity() - gain * h;
  out.covariance = ikh * track.covariance * ikh.transpose() + gain * track.observation_noise * gain.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  return out;
}

double innovation_nis(const ObstacleTrackState& track, const TrackObservation& obs) {
  const Mat48 h = observation_matrix();
  const Eigen::Vector4d innovation = as_vector(obs) - h * track.mean;
  const Mat4 s = h * track.covariance * h.transpose() + track.observation_noise;
  return innovation.dot(s.ldlt().solve(innovation));
}

SuperEllipsoidObstacle track_to_obstacle(const ObstacleTrackState& track, const ObstacleShape& shape) {
  SuperEllipsoidObstacle o;
  o.center = track.mean.head<3>();
  const double r = std::max(kMinTrackRadius, track.mean(3));
  o.a = o.b = r;
  o.c = std::min(shape.thickness, r);
  o.inflate_a = o.inflate_b = o.inflate_c = shape.inflation;
  o.velocity = track.mean.segment<3>(4);
  return o;
}

std::vector<std::vector<SuperEllipsoidObstacle>> predict_obstacles(std::span<const ObstacleTrackState> tracks,
                                                                   int horizon, double dt,
                                                                   const ObstacleShape& shape) {
  if (horizon < 1) throw Error("predict_obstacles: horizon must be >= 1");
  if (!(dt > 0.0)) throw Error("predict_obstacles: dt must be positive");
  const Mat8 f = transition(dt);
  std::vector<std::vector<SuperEllipsoidObstacle>> out(static_cast<std::size_t>(horizon) + 1);
  for (auto& step : out) step.reserve(tracks.size());
  for (const auto& track : tracks) {
    ObstacleTrackState t = track;
    out[0].push_back(track_to_obstacle(t, shape));
    for (int i = 1; i <= horizon; ++i) {
      t.mean = f * t.mean;
      t.mean(3) = std::max(kMinTrackRadius, t.mean(3));
      out[static_cast<std::size_t>(i)].push_back(track_to_obstacle(t, shape));
    }
  }
  return out;
}

}  // namespace shadowplan
