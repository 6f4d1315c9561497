#pragma once

#include "shadowplan/ifds.hpp"

#include <cstdint>
#include <vector>

namespace shadowplan {

/// Random smooth path from start to goal with steps of v0*dt that respects
/// the turn, climb and altitude limits. Throws "path generation failed"
/// when no admissible path is found.
Trajectory gen_initial_path(const Vec3& start, const Vec3& goal, const KinematicLimits& limits, std::uint64_t seed);

/// u_i = (P_{i+1} - P_i) / dt for every consecutive pair.
std::vector<Vec3> velocity_field_from_path(const Trajectory& traj, double dt);

/// First index i at which the step i -> i+1 violates a limit, or -1.
long first_limit_violation(const Trajectory& traj, const KinematicLimits& limits, double turn_tolerance = 1e-9);

}  // namespace shadowplan
