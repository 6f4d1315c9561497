#include "shadowplan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shadowplan {

void CameraModel::validate() const {
  if (!(fov > 0.0 && fov < std::numbers::pi)) throw Error("camera: fov must lie in (0, pi)");
  if (!(gsd_slope > 0.0)) throw Error("camera: gsd slope must be positive");
}

double footprint_width(double altitude, const CameraModel& camera) {
  if (!(altitude > 0.0)) throw Error("footprint_width: altitude must be positive");
  return 2.0 * altitude * std::tan(0.5 * camera.fov);
}

double gsd(double altitude, const CameraModel& camera) {
  if (!(altitude > 0.0)) throw Error("gsd: altitude must be positive");
  return camera.gsd_slope * altitude;
}

double smoothness(const Trajectory& traj, double dt) {
  if (traj.size() < 2) throw Error("smoothness: need at least two points");
  double sum = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double dpsi = wrap_angle(traj.heading[i] - traj.heading[i - 1]) / dt;
    const double dtheta = wrap_angle(traj.pitch[i] - traj.pitch[i - 1]) / dt;
    sum += (dpsi * dpsi + dtheta * dtheta) * dt;
  }
  return sum;
}

CoverageAccumulator::CoverageAccumulator(const ChannelGeometry& channel, CameraModel camera)
    : channel_(&channel), camera_(camera), seen_(channel.nx() * channel.ny(), 0) {
  camera_.validate();
}

CoverageAccumulator::Step CoverageAccumulator::step(const Vec3& position, double heading, double length,
                                                    const ShadowMap& shadows) {
  Step out;
  const double altitude = position.z() - channel_->centerline().point_at(0.0).z();
  if (!(altitude > 0.0)) return out;
  const double half_w = 0.5 * footprint_width(altitude, camera_);
  const double half_l = 0.5 * length;
  const double ch = std::cos(heading);
  const double sh = std::sin(heading);
  const double reach = std::hypot(half_w, half_l);
  const double cell = channel_->cell_size();
  const double area = cell * cell;
  const Aabb& bb = channel_->bounds();

  const auto lo_i = static_cast<long>(std::floor((position.x() - reach - bb.min.x()) / cell));
  const auto hi_i = static_cast<long>(std::floor((position.x() + reach - bb.min.x()) / cell));
  const auto lo_j = static_cast<long>(std::floor((position.y() - reach - bb.min.y()) / cell));
  const auto hi_j = static_cast<long>(std::floor((position.y() + reach - bb.min.y()) / cell));
  const auto nx = static_cast<long>(channel_->nx());
  const auto ny = static_cast<long>(channel_->ny());
  std::size_t in_channel = 0;
  std::size_t clear = 0;
  for (long j = std::max(0L, lo_j); j <= std::min(ny - 1, hi_j); ++j) {
    for (long i = std::max(0L, lo_i); i <= std::min(nx - 1, hi_i); ++i) {
      const auto idx = static_cast<std::size_t>(j * nx + i);
      if (!channel_->cell_in_channel(idx)) continue;
      const Vec3 c = channel_->cell_center(idx);
      const double dx = c.x() - position.x();
      const double dy = c.y() - position.y();
      const double along = ch * dx + sh * dy;
      const double across = -sh * dx + ch * dy;
      if (std::abs(along) > half_l || std::abs(across) > half_w) continue;
      ++in_channel;
      if (shadows.shadowed(c.x(), c.y())) continue;
      ++clear;
      if (seen_[idx] == 0) {
        seen_[idx] = 1;
        out.new_area += area;
      }
    }
  }
  out.effective_area = static_cast<double>(clear) * area;
  out.ratio = in_channel == 0 ? 0.0 : static_cast<double>(clear) / static_cast<double>(in_channel);
  cumulative_ += out.new_area;
  return out;
}

double lyapunov_value(const Vec3& p, const LyapunovMonitor& m) {
  const double r2 = (p.head<2>() - m.target.head<2>()).squaredNorm();
  const double h = p.z() - m.target.z();
  const double er = r2 - m.radius * m.radius;
  const double eh = h * h - m.altitude * m.altitude;
  return 0.5 * er * er + 0.5 * eh * eh;
}

Vec3 lyapunov_gradient(const Vec3& p, const LyapunovMonitor& m) {
  const Eigen::Vector2d d = p.head<2>() - m.target.head<2>();
  const double h = p.z() - m.target.z();
  const double er = d.squaredNorm() - m.radius * m.radius;
  return {2.0 * er * d.x(), 2.0 * er * d.y(), 2.0 * h * (h * h - m.altitude * m.altitude)};
}

DescentCheck check_descent(const std::vector<double>& series, double tolerance) {
  if (series.size() < 2) throw Error("check_descent: need at least two samples");
  DescentCheck out;
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    if (series[i + 1] - series[i] > tolerance * std::max(1.0, series[i])) out.violations.push_back(i);
  }
  out.fraction = 1.0 - static_cast<double>(out.violations.size()) / static_cast<double>(series.size() - 1);
  return out;
}

void record(LyapunovMonitor& monitor, const Vec3& p, double tolerance) {
  const double v = lyapunov_value(p, monitor);
  if (!monitor.series.empty() && v - monitor.series.back() > tolerance * std::max(1.0, monitor.series.back())) {
    ++monitor.violations;
  }
  monitor.series.push_back(v);
}

Vec3 loiter_velocity(const Vec3& p, const LyapunovMonitor& m, double speed, double dt, double gain) {
  const double step = speed * dt;
  const Eigen::Vector2d d = p.head<2>() - m.target.head<2>();
  const double r = d.norm();
  const double h = p.z() - m.target.z();
  // errors shrink by `gain * dt` of themselves, capped by the step length
  const double dh = std::clamp(-gain * dt * (h - m.altitude), -0.5 * step, 0.5 * step);
  const double dz_room = std::sqrt(step * step - dh * dh);
  if (r < 1e-9) return Vec3(dz_room, 0.0, dh) / dt;
  const double r_next = r - std::clamp(gain * dt * (r - m.radius), -dz_room, dz_room);
  const Eigen::Vector2d radial = d / r;
  const Eigen::Vector2d tangent(-radial.y(), radial.x());
  // radial share that lands exactly on r_next; inside the circle it may not
  // point inward, at the price of overshooting when very close to the rim
  double a = (r_next * r_next - r * r - dz_room * dz_room) / (2.0 * r);
  if (r < m.radius) a = std::max(a, 0.0);
  a = std::clamp(a, -dz_room, dz_room);
  const Eigen::Vector2d move = a * radial + std::sqrt(dz_room * dz_room - a * a) * tangent;
  return Vec3(move.x(), move.y(), dh) / dt;
}

RunMetrics summarize_run(const std::vector<StepRecord>& log, const Centerline& centerline, double dt,
                         std::size_t step_budget, double goal_tolerance) {
  if (log.empty()) throw Error("summarize_run: empty log");
  RunMetrics m;
  m.steps = log.size() - 1;
  m.min_gamma = std::numeric_limits<double>::infinity();
  m.min_altitude = std::numeric_limits<double>::infinity();
  Trajectory traj;
  double ratio_sum = 0.0;
  double ms_sum = 0.0;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const StepRecord& r = log[i];
    traj.push_back(r.position, r.heading, r.pitch);
    if (i > 0) m.path_length += (r.position - log[i - 1].position).norm();
    m.min_gamma = std::min(m.min_gamma, r.min_gamma);
    m.min_altitude = std::min(m.min_altitude, r.position.z());
    m.coverage_area += r.coverage_new;
    ratio_sum += r.coverage_ratio;
    ms_sum += r.step_ms;
    m.gsd_series.push_back(r.gsd);
    if (r.emergency) ++m.emergencies;
  }
  m.mean_coverage_ratio = ratio_sum / static_cast<double>(log.size());
  m.mean_step_ms = m.steps > 0 ? ms_sum / static_cast<double>(m.steps) : 0.0;
  m.smoothness = log.size() >= 2 ? smoothness(traj, dt) : 0.0;
  const auto proj = centerline.project(log.back().position);
  m.reached_goal = proj.station >= centerline.length() - goal_tolerance && m.steps <= step_budget;
  m.collided = !(m.min_gamma > 1.0);
  m.success = m.reached_goal && !m.collided;
  return m;
}

}  // namespace shadowplan
