#pragma once

#include "shadowplan/geometry.hpp"
#include "shadowplan/scenario.hpp"

#include <vector>

namespace shadowplan {

struct FitParams {
  /// grid size for connected-component clustering (m)
  double cluster_cell{2.0};
  /// semi-axis = sigma_scale * per-axis standard deviation
  double sigma_scale{2.0};
  double inflation{1.1};
  double thickness{10.0};
  /// altitude of the lifted obstacle layer
  double altitude{100.0};
  /// minimum fraction of a cluster's points that must satisfy Gamma <= 1
  double containment{0.95};
  /// floor on fitted semi-axes (m), half the shadow sampling pitch
  double min_axis{0.5};
};

/// Clusters shadow points and fits one yawed ellipsoid per cluster.
/// Clusters with fewer than three distinct points are dropped; the
/// largest `max_count` clusters are kept, largest first.
std::vector<SuperEllipsoidObstacle> fit_ellipsoids(const ShadowSample& sample, int max_count,
                                                   const FitParams& params = {});

}  // namespace shadowplan
