#include "shadowplan/fitting.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <utility>

namespace shadowplan {

namespace {

using Cell = std::pair<long, long>;

std::vector<std::vector<std::size_t>> cluster_points(const std::vector<Vec3>& pts, double cell) {
  std::map<Cell, std::vector<std::size_t>> grid;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    grid[{static_cast<long>(std::floor(pts[i].x() / cell)), static_cast<long>(std::floor(pts[i].y() / cell))}]
        .push_back(i);
  }
  std::map<Cell, int> label;
  std::vector<std::vector<std::size_t>> clusters;
  for (const auto& [start, _] : grid) {
    if (label.contains(start)) continue;
    const int id = static_cast<int>(clusters.size());
    clusters.emplace_back();
    std::vector<Cell> stack{start};
    label[start] = id;
    while (!stack.empty()) {
      const Cell c = stack.back();
      stack.pop_back();
      const auto& members = grid.at(c);
      clusters[id].insert(clusters[id].end(), members.begin(), members.end());
      for (long dx = -1; dx <= 1; ++dx) {
        for (long dy = -1; dy <= 1; ++dy) {
          const Cell n{c.first + dx, c.second + dy};
          if (grid.contains(n) && !label.contains(n)) {
            label[n] = id;
            stack.push_back(n);
          }
        }
      }
    }
  }
  for (auto& c : clusters) std::sort(c.begin(), c.end());
  return clusters;
}

std::size_t distinct_count(const std::vector<Vec3>& pts, const std::vector<std::size_t>& idx) {
  std::set<std::pair<double, double>> seen;
  for (std::size_t i : idx) seen.emplace(pts[i].x(), pts[i].y());
  return seen.size();
}

double contained_fraction(const std::vector<Vec3>& pts, const std::vector<std::size_t>& idx,
                          const SuperEllipsoidObstacle& obs) {
  std::size_t inside = 0;
  for (std::size_t i : idx) {
    if (gamma_value(Vec3(pts[i].x(), pts[i].y(), obs.center.z()), obs) <= 1.0) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(idx.size());
}

}  // namespace

std::vector<SuperEllipsoidObstacle> fit_ellipsoids(const ShadowSample& sample, int max_count,
                                                   const FitParams& params) {
  if (sample.points.empty()) throw Error("fit_ellipsoids: empty shadow sample");
  if (max_count < 1) throw Error("fit_ellipsoids: max_count must be >= 1");
  if (!(params.cluster_cell > 0.0) || !(params.sigma_scale > 0.0) || !(params.inflation >= 1.0)) {
    throw Error("fit_ellipsoids: invalid fit parameters");
  }

  auto clusters = cluster_points(sample.points, params.cluster_cell);
  std::erase_if(clusters, [&](const auto& c) { return distinct_count(sample.points, c) < 3; });
  std::stable_sort(clusters.begin(), clusters.end(), [](const auto& l, const auto& r) {
    if (l.size() != r.size()) return l.size() > r.size();
    return l.front() < r.front();
  });
  if (clusters.size() > static_cast<std::size_t>(max_count)) clusters.resize(static_cast<std::size_t>(max_count));

  std::vector<SuperEllipsoidObstacle> out;
  out.reserve(clusters.size());
  for (const auto& idx : clusters) {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (std::size_t i : idx) mean += sample.points[i].head<2>();
    mean /= static_cast<double>(idx.size());
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (std::size_t i : idx) {
      const Eigen::Vector2d d = sample.points[i].head<2>() - mean;
      cov += d * d.transpose();
    }
    cov /= static_cast<double>(idx.size());

    // eigenvalues come back ascending; column 1 is the major axis
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
    const Eigen::Vector2d major = eig.eigenvectors().col(1);
    double yaw = std::atan2(major.y(), major.x());
    if (yaw > std::numbers::pi / 2) yaw -= std::numbers::pi;
    if (yaw <= -std::numbers::pi / 2) yaw += std::numbers::pi;

    SuperEllipsoidObstacle obs;
    obs.center = Vec3(mean.x(), mean.y(), params.altitude);
    obs.yaw = yaw;
    obs.a = std::max(params.min_axis, params.sigma_scale * std::sqrt(std::max(0.0, eig.eigenvalues()(1))));
    obs.b = std::max(params.min_axis, params.sigma_scale * std::sqrt(std::max(0.0, eig.eigenvalues()(0))));
    obs.inflate_a = obs.inflate_b = obs.inflate_c = params.inflation;
    // grow the footprint until the containment requirement holds
    while (contained_fraction(sample.points, idx, obs) < params.containment) {
      obs.a *= 1.05;
      obs.b *= 1.05;
    }
    obs.c = std::min({params.thickness, obs.a, obs.b});
    out.push_back(obs);
  }
  return out;
}

}  // namespace shadowplan
