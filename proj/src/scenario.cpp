#include "shadowplan/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace shadowplan {

ShadowPreset preset_by_name(const std::string& name) {
  ShadowPreset p;
  p.name = name;
  if (name == "open") {
    p.blob_count = 0;
  } else if (name == "sparse") {
    p.blob_count = 4;
    p.radius_min = 15.0;
    p.radius_max = 25.0;
  } else if (name == "dense") {
    // cloud shadows streaming across the channel on a shared wind, entering
    // from well outside the banks
    p.blob_count = 16;
    p.speed_min = 5.0;
    p.speed_max = 9.0;
    p.wind_heading = std::numbers::pi / 2.0;
    p.heading_spread = 20.0 * std::numbers::pi / 180.0;
    p.lateral_spread = 1.8;
    p.min_gap = 10.0;
  } else if (name == "narrow") {
    // static two-row corridor; the clear lane between the rows is narrower
    // than the observable-width threshold for about 320 m of the route
    p.channel_half_width = 45.0;
    p.blob_count = 0;
    p.speed_max = 0.0;
    p.wobble_amplitude = 0.0;
    p.pulse_fraction = 0.0;
    p.corridor_start = 100.0;
    p.corridor_end = 420.0;
    p.corridor_radius = 16.0;
    p.corridor_offset = 28.0;
    p.corridor_spacing = 14.0;
  } else {
    throw Error("unknown scenario preset '" + name + "'");
  }
  return p;
}

void RiverScenario::validate() const {
  if (control_points.size() < 4) throw Error("river needs at least 4 control points");
  if (!(half_width > 0.0)) throw Error("river half-width must be positive");
  if (!(mission_duration >= 0.0)) throw Error("mission duration must be non-negative");
  for (const auto& cp : control_points) {
    if (!bounds.contains(cp)) throw Error("river control point outside domain bounds");
  }
}

RiverScenario default_river(double half_width, std::uint64_t seed) {
  RiverScenario r;
  r.control_points = {{0.0, 0.0, 0.0},     {100.0, 12.0, 0.0}, {200.0, -12.0, 0.0},
                      {300.0, 12.0, 0.0},  {400.0, -12.0, 0.0}, {500.0, 0.0, 0.0}};
  r.half_width = half_width;
  const double margin = 60.0;
  r.bounds.min = Vec3(-margin, -half_width - margin - 12.0, 0.0);
  r.bounds.max = Vec3(500.0 + margin, half_width + margin + 12.0, 200.0);
  r.seed = seed;
  return r;
}

ChannelGeometry::ChannelGeometry(const RiverScenario& river, double cell_size)
    : centerline_(river.control_points), half_width_(river.half_width), bounds_(river.bounds), cell_(cell_size) {
  river.validate();
  if (!(cell_size > 0.0)) throw Error("cell size must be positive");
  nx_ = static_cast<std::size_t>(std::ceil((bounds_.max.x() - bounds_.min.x()) / cell_));
  ny_ = static_cast<std::size_t>(std::ceil((bounds_.max.y() - bounds_.min.y()) / cell_));
  mask_.assign(nx_ * ny_, 0);
  for (std::size_t j = 0; j < ny_; ++j) {
    for (std::size_t i = 0; i < nx_; ++i) {
      const Vec3 c = cell_center(j * nx_ + i);
      const auto proj = centerline_.project(c);
      const bool interior = proj.station > 0.0 && proj.station < centerline_.length();
      if (interior && std::abs(proj.cross_track) <= half_width_) {
        mask_[j * nx_ + i] = 1;
        ++channel_cells_;
      }
    }
  }
}

std::size_t ChannelGeometry::cell_index(double x, double y) const {
  const double fx = (x - bounds_.min.x()) / cell_;
  const double fy = (y - bounds_.min.y()) / cell_;
  if (fx < 0.0 || fy < 0.0) return npos;
  const auto i = static_cast<std::size_t>(fx);
  const auto j = static_cast<std::size_t>(fy);
  if (i >= nx_ || j >= ny_) return npos;
  return j * nx_ + i;
}

Vec3 ChannelGeometry::cell_center(std::size_t index) const {
  const std::size_t i = index % nx_;
  const std::size_t j = index / nx_;
  return {bounds_.min.x() + (static_cast<double>(i) + 0.5) * cell_,
          bounds_.min.y() + (static_cast<double>(j) + 0.5) * cell_, centerline_.point_at(0.0).z()};
}

bool ChannelGeometry::in_channel(double x, double y) const {
  const std::size_t idx = cell_index(x, y);
  return idx != npos && mask_[idx] != 0;
}

Scenario::Scenario(RiverScenario river, ShadowPreset preset)
    : Scenario(river, std::move(preset), std::make_shared<const ChannelGeometry>(river)) {}

Scenario::Scenario(RiverScenario river, ShadowPreset preset, std::shared_ptr<const ChannelGeometry> channel)
    : river_(std::move(river)), preset_(std::move(preset)), channel_(std::move(channel)) {
  river_.validate();
  if (!channel_) throw Error("scenario requires channel geometry");
  generate_blobs();
}

void Scenario::generate_blobs() {
  std::mt19937_64 rng(river_.seed ^ 0x5AD0'57A7'E5EEDULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Centerline& cl = centerline();
  const double length = cl.length();
  const Vec3 start = cl.point_at(0.0);
  const Vec3 goal = cl.point_at(length);
  const double spread = preset_.lateral_spread * river_.half_width;

  std::vector<double> reaches;
  for (int k = 0; k < preset_.blob_count; ++k) {
    ShadowBlob blob;
    blob.a0 = preset_.radius_min + unit(rng) * (preset_.radius_max - preset_.radius_min);
    const double aspect = 1.0 + unit(rng) * (preset_.aspect_max - 1.0);
    blob.b0 = blob.a0 / aspect;
    blob.yaw = (unit(rng) - 0.5) * std::numbers::pi;
    blob.exponent = 1 + static_cast<int>(unit(rng) * preset_.exponent_max);
    blob.exponent = std::clamp(blob.exponent, 1, std::max(1, preset_.exponent_max));
    const double reach = BlobState{0, 0, blob.a0 * (1.0 + preset_.pulse_fraction),
                                   blob.b0 * (1.0 + preset_.pulse_fraction), 0, blob.exponent}
                             .circumscribed_radius();

    // rejection-sample a placement that keeps the start and goal clear
    for (int attempt = 0; attempt < 200; ++attempt) {
      const double s = preset_.start_clearance + unit(rng) * std::max(0.0, length - preset_.start_clearance -
                                                                                 preset_.goal_clearance);
      const double off = (2.0 * unit(rng) - 1.0) * spread;
      const Vec3 base = cl.point_at(s);
      const Vec3 t = cl.tangent_at(s);
      const Vec3 c = base + off * Vec3(-t.y(), t.x(), 0.0);
      blob.x0 = c.x();
      blob.y0 = c.y();
      const double ds = std::hypot(c.x() - start.x(), c.y() - start.y());
      const double dg = std::hypot(c.x() - goal.x(), c.y() - goal.y());
      bool spaced = true;
      for (std::size_t j = 0; j < blobs_.size() && spaced; ++j) {
        spaced = std::hypot(c.x() - blobs_[j].x0, c.y() - blobs_[j].y0) >= reach + reaches[j] + preset_.min_gap;
      }
      if (spaced && ds > reach + preset_.start_clearance && dg > reach + preset_.goal_clearance) break;
    }

    const double draw = unit(rng);
    const double heading = preset_.heading_spread < 0.0
                               ? draw * 2.0 * std::numbers::pi
                               : preset_.wind_heading + (2.0 * draw - 1.0) * preset_.heading_spread;
    const double speed = preset_.speed_min + unit(rng) * (preset_.speed_max - preset_.speed_min);
    blob.vx = speed * std::cos(heading);
    blob.vy = speed * std::sin(heading);
    blob.wobble_amplitude = preset_.wobble_amplitude * unit(rng);
    blob.wobble_omega = preset_.wobble_period > 0.0 ? 2.0 * std::numbers::pi / preset_.wobble_period : 0.0;
    blob.wobble_phase = unit(rng) * 2.0 * std::numbers::pi;
    blob.pulse_fraction = preset_.pulse_fraction;
    blob.pulse_omega = preset_.pulse_period > 0.0 ? 2.0 * std::numbers::pi / preset_.pulse_period : 0.0;
    blob.pulse_phase = unit(rng) * 2.0 * std::numbers::pi;
    blobs_.push_back(blob);
    reaches.push_back(reach);
  }

  if (preset_.has_corridor()) {
    for (double s = preset_.corridor_start; s <= preset_.corridor_end + 1e-9; s += preset_.corridor_spacing) {
      const Vec3 base = cl.point_at(s);
      const Vec3 t = cl.tangent_at(s);
      const Vec3 left(-t.y(), t.x(), 0.0);
      for (double side : {1.0, -1.0}) {
        ShadowBlob blob;
        const Vec3 c = base + side * preset_.corridor_offset * left;
        blob.x0 = c.x();
        blob.y0 = c.y();
        blob.a0 = blob.b0 = preset_.corridor_radius;
        blobs_.push_back(blob);
      }
    }
  }
}

std::vector<BlobState> Scenario::blob_states(double t) const {
  if (!(t >= 0.0) || t > river_.mission_duration) throw Error("shadow field sampled outside the mission window");
  std::vector<BlobState> out;
  out.reserve(blobs_.size());
  for (const auto& b : blobs_) out.push_back(b.at(t));
  return out;
}

ShadowSample sample_shadow_field(const Scenario& scenario, double t, double resolution) {
  if (!(resolution > 0.0)) throw Error("sample resolution must be positive");
  const BlobShadowMap map = scenario.shadows_at(t);
  const ChannelGeometry& ch = scenario.channel();
  const Aabb& bb = ch.bounds();
  const double z = scenario.centerline().point_at(0.0).z();
  ShadowSample out;
  out.time = t;
  for (double y = bb.min.y() + 0.5 * resolution; y < bb.max.y(); y += resolution) {
    for (double x = bb.min.x() + 0.5 * resolution; x < bb.max.x(); x += resolution) {
      if (ch.in_channel(x, y) && map.shadowed(x, y)) out.points.emplace_back(x, y, z);
    }
  }
  return out;
}

double shadowed_area_fraction(const Scenario& scenario, double t) {
  const BlobShadowMap map = scenario.shadows_at(t);
  const ChannelGeometry& ch = scenario.channel();
  std::size_t shadowed = 0;
  for (std::size_t idx = 0; idx < ch.nx() * ch.ny(); ++idx) {
    if (!ch.cell_in_channel(idx)) continue;
    const Vec3 c = ch.cell_center(idx);
    if (map.shadowed(c.x(), c.y())) ++shadowed;
  }
  return ch.channel_cell_count() == 0 ? 0.0
                                      : static_cast<double>(shadowed) / static_cast<double>(ch.channel_cell_count());
}

Vec3 reference_field(const ChannelGeometry& channel, const Vec3& p, const ReferenceFieldParams& params) {
  if (!channel.bounds().contains(p)) throw Error("reference field queried outside domain bounds");
  const auto proj = channel.centerline().project(p);
  const double blend = std::clamp(-params.normal_gain * proj.cross_track, -params.max_blend, params.max_blend);
  return (proj.tangent + blend * proj.left).normalized();
}

Vec3 reference_field(const Scenario& scenario, const Vec3& p, const ReferenceFieldParams& params) {
  return reference_field(scenario.channel(), p, params);
}

}  // namespace shadowplan
