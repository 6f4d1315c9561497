#include "shadowplan/centerline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shadowplan {

namespace {

// uniform Catmull-Rom between p1 and p2
Vec3 catmull_rom(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3, double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return 0.5 * ((2.0 * p1) + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2 +
                (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t3);
}

Vec3 horizontal(const Vec3& v) { return {v.x(), v.y(), 0.0}; }

constexpr std::size_t kCoarseStride = 8;

}  // namespace

Centerline::Centerline(std::vector<Vec3> control_points, double spacing) : control_(std::move(control_points)) {
  if (control_.size() < 4) throw Error("centerline needs at least 4 control points");
  if (!(spacing > 0.0)) throw Error("centerline spacing must be positive");

  // fine sampling of the spline, then arc-length resampling at `spacing`
  std::vector<Vec3> fine;
  const std::size_t n = control_.size();
  constexpr int kSub = 64;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Vec3& p0 = control_[i == 0 ? 0 : i - 1];
    const Vec3& p1 = control_[i];
    const Vec3& p2 = control_[i + 1];
    const Vec3& p3 = control_[std::min(i + 2, n - 1)];
    for (int k = 0; k < kSub; ++k) fine.push_back(catmull_rom(p0, p1, p2, p3, static_cast<double>(k) / kSub));
  }
  fine.push_back(control_.back());

  std::vector<double> fine_s(fine.size(), 0.0);
  for (std::size_t i = 1; i < fine.size(); ++i) fine_s[i] = fine_s[i - 1] + horizontal(fine[i] - fine[i - 1]).norm();
  const double total = fine_s.back();
  if (!(total > 0.0)) throw Error("centerline has zero length");

  const auto count = static_cast<std::size_t>(std::ceil(total / spacing));
  std::size_t j = 0;
  for (std::size_t k = 0; k <= count; ++k) {
    const double s = std::min(total, static_cast<double>(k) * total / static_cast<double>(count));
    while (j + 2 < fine.size() && fine_s[j + 1] < s) ++j;
    const double span = fine_s[j + 1] - fine_s[j];
    const double t = span > 0.0 ? std::clamp((s - fine_s[j]) / span, 0.0, 1.0) : 0.0;
    points_.push_back(fine[j] + t * (fine[j + 1] - fine[j]));
  }
  stations_.assign(points_.size(), 0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    stations_[i] = stations_[i - 1] + horizontal(points_[i] - points_[i - 1]).norm();
  }
}

double Centerline::segment_distance_sq(std::size_t seg, const Vec3& p, double* t_out) const {
  const Vec3 a = horizontal(points_[seg]);
  const Vec3 d = horizontal(points_[seg + 1]) - a;
  const Vec3 q = horizontal(p);
  const double len_sq = d.squaredNorm();
  const double t = len_sq > 0.0 ? std::clamp((q - a).dot(d) / len_sq, 0.0, 1.0) : 0.0;
  if (t_out != nullptr) *t_out = t;
  return (q - (a + t * d)).squaredNorm();
}

Centerline::Projection Centerline::project(const Vec3& p) const {
  const std::size_t segments = points_.size() - 1;
  // coarse pass over every kCoarseStride-th vertex, refine around the best few
  std::size_t best_coarse = 0;
  double best_coarse_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); i += kCoarseStride) {
    const double d = horizontal(points_[i] - p).squaredNorm();
    if (d < best_coarse_d) {
      best_coarse_d = d;
      best_coarse = i;
    }
  }
  const std::size_t lo = best_coarse > 2 * kCoarseStride ? best_coarse - 2 * kCoarseStride : 0;
  const std::size_t hi = std::min(segments, best_coarse + 2 * kCoarseStride);
  std::size_t best = lo;
  double best_t = 0.0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t seg = lo; seg < hi; ++seg) {
    double t = 0.0;
    const double d = segment_distance_sq(seg, p, &t);
    if (d < best_d) {
      best_d = d;
      best = seg;
      best_t = t;
    }
  }

  Projection out;
  const Vec3 a = points_[best];
  const Vec3 b = points_[best + 1];
  out.point = a + best_t * (b - a);
  out.station = stations_[best] + best_t * (stations_[best + 1] - stations_[best]);
  out.tangent = tangent_at(out.station);
  out.left = Vec3(-out.tangent.y(), out.tangent.x(), 0.0);
  out.cross_track = horizontal(p - out.point).dot(out.left);
  return out;
}

std::size_t Centerline::segment_at(double station) const {
  const auto it = std::upper_bound(stations_.begin(), stations_.end(), station);
  const auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - stations_.begin() - 1));
  return std::min(idx, points_.size() - 2);
}

Vec3 Centerline::point_at(double station) const {
  const double s = std::clamp(station, 0.0, length());
  const std::size_t seg = segment_at(s);
  const double span = stations_[seg + 1] - stations_[seg];
  const double t = span > 0.0 ? (s - stations_[seg]) / span : 0.0;
  return points_[seg] + t * (points_[seg + 1] - points_[seg]);
}

Vec3 Centerline::tangent_at(double station) const {
  // blend neighbouring segment directions so the tangent is continuous in station
  const double s = std::clamp(station, 0.0, length());
  const std::size_t seg = segment_at(s);
  const Vec3 d_here = horizontal(points_[seg + 1] - points_[seg]).normalized();
  const double span = stations_[seg + 1] - stations_[seg];
  const double t = span > 0.0 ? (s - stations_[seg]) / span : 0.0;
  Vec3 d_other = d_here;
  double w = 0.0;
  if (t < 0.5 && seg > 0) {
    d_other = horizontal(points_[seg] - points_[seg - 1]).normalized();
    w = 0.5 - t;
  } else if (t >= 0.5 && seg + 2 < points_.size()) {
    d_other = horizontal(points_[seg + 2] - points_[seg + 1]).normalized();
    w = t - 0.5;
  }
  return ((1.0 - w) * d_here + w * d_other).normalized();
}

}  // namespace shadowplan
