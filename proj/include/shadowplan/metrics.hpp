#pragma once

#include "shadowplan/ifds.hpp"
#include "shadowplan/scenario.hpp"
#include "shadowplan/shadow_field.hpp"

#include <cstdint>
#include <numbers>
#include <vector>

namespace shadowplan {

struct CameraModel {
  double fov{std::numbers::pi / 3.0};  ///< full field-of-view angle (rad)
  double gsd_slope{0.0015};             ///< m/px per metre of altitude

  void validate() const;
};

/// Ground width of the nadir footprint, 2 h tan(fov / 2).
double footprint_width(double altitude, const CameraModel& camera);
double gsd(double altitude, const CameraModel& camera);

/// Sum of squared heading and pitch rates times dt, angles wrapped.
double smoothness(const Trajectory& traj, double dt);

/// Coverage of the water surface by the nadir footprint, on the channel raster.
class CoverageAccumulator {
 public:
  struct Step {
    double effective_area{0.0};  ///< clear cells under the footprint (m^2)
    double ratio{0.0};           ///< effective / footprint-in-channel
    double new_area{0.0};        ///< clear cells seen for the first time (m^2)
  };

  CoverageAccumulator(const ChannelGeometry& channel, CameraModel camera);

  /// Footprint: rectangle of footprint width across track, `length` along track, centred at nadir.
  Step step(const Vec3& position, double heading, double length, const ShadowMap& shadows);
  double cumulative_area() const { return cumulative_; }

 private:
  const ChannelGeometry* channel_;
  CameraModel camera_;
  std::vector<std::uint8_t> seen_;
  double cumulative_{0.0};
};

/// Convergence monitor for V = 1/2 (r^2 - R^2)^2 + 1/2 (h^2 - H^2)^2, with r
/// the horizontal distance to the target and h the height above it.
struct LyapunovMonitor {
  Vec3 target{Vec3::Zero()};
  double radius{0.0};
  double altitude{100.0};
  std::vector<double> series;
  std::size_t violations{0};
};

double lyapunov_value(const Vec3& p, const LyapunovMonitor& monitor);
Vec3 lyapunov_gradient(const Vec3& p, const LyapunovMonitor& monitor);

struct DescentCheck {
  double fraction{1.0};
  std::vector<std::size_t> violations;
};

/// Step i violates when V[i+1] - V[i] > tolerance * max(1, V[i]).
DescentCheck check_descent(const std::vector<double>& series, double tolerance);

/// Appends V(p) to the series and counts increases beyond `tolerance`.
void record(LyapunovMonitor& monitor, const Vec3& p, double tolerance = 1e-9);

/// Obstacle-free loiter guidance: the move over one step lands on the
/// circle/altitude pair obtained by shrinking the radial and vertical errors,
/// advancing tangentially with whatever length is left. The velocity never
/// points up the gradient of the Lyapunov function.
Vec3 loiter_velocity(const Vec3& p, const LyapunovMonitor& monitor, double speed, double dt, double gain = 0.5);

/// One row of the per-step log.
struct StepRecord {
  double t{0.0};
  Vec3 position{Vec3::Zero()};
  double heading{0.0};
  double pitch{0.0};
  int chosen{-1};
  bool has_costs{false};
  double tracking{0.0};
  double obstacle{0.0};
  double smoothness{0.0};
  double total{0.0};
  double w_eff{0.0};
  bool dfaa_active{false};
  double min_gamma{0.0};
  double step_ms{0.0};
  double coverage_new{0.0};
  double coverage_ratio{0.0};
  double gsd{0.0};
  double lyapunov{0.0};
  bool emergency{false};
};

struct RunMetrics {
  bool success{false};
  bool reached_goal{false};
  bool collided{false};
  double path_length{0.0};
  double smoothness{0.0};
  double min_gamma{0.0};
  double coverage_area{0.0};
  double mean_coverage_ratio{0.0};
  std::vector<double> gsd_series;
  double mean_step_ms{0.0};
  double min_altitude{0.0};
  std::size_t steps{0};
  std::size_t emergencies{0};
};

/// Aggregates a step log. Row 0 is the initial state; the goal counts as
/// reached when the final station is within `goal_tolerance` of the end.
RunMetrics summarize_run(const std::vector<StepRecord>& log, const Centerline& centerline, double dt,
                         std::size_t step_budget, double goal_tolerance = 1.0);

}  // namespace shadowplan
