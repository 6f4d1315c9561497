#pragma once

#include "shadowplan/centerline.hpp"
#include "shadowplan/geometry.hpp"
#include "shadowplan/shadow_field.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace shadowplan {

/// Generator settings for one family of shadow fields.
struct ShadowPreset {
  std::string name{"dense"};
  /// channel half-width the preset is designed for (m)
  double channel_half_width{75.0};
  int blob_count{10};
  double radius_min{18.0};
  double radius_max{30.0};
  double aspect_max{1.4};
  int exponent_max{2};
  double speed_min{0.0};
  double speed_max{1.5};
  /// Drift headings: uniform over the circle when heading_spread < 0, otherwise
  /// wind_heading + uniform(-spread, spread), measured from the world x axis.
  double wind_heading{0.0};
  double heading_spread{-1.0};
  double wobble_amplitude{4.0};
  double wobble_period{20.0};
  double pulse_fraction{0.1};
  double pulse_period{25.0};
  /// blob centers are placed within this fraction of the half-width
  double lateral_spread{0.8};
  /// stations near the start / goal kept free at t = 0
  double start_clearance{60.0};
  double goal_clearance{20.0};
  /// minimum free gap between the reach circles of random blobs at t = 0 (m)
  double min_gap{0.0};
  /// Optional static corridor: two rows of round blobs flanking the
  /// centerline between the given stations. Disabled when end <= start.
  double corridor_start{0.0};
  double corridor_end{0.0};
  double corridor_radius{16.0};
  double corridor_offset{28.0};
  double corridor_spacing{14.0};

  bool has_corridor() const { return corridor_end > corridor_start; }
};

/// Built-in presets: "open", "sparse", "dense", "narrow".
ShadowPreset preset_by_name(const std::string& name);

struct RiverScenario {
  std::vector<Vec3> control_points;
  double half_width{75.0};
  Aabb bounds;
  std::uint64_t seed{0};
  /// Time window over which the shadow field may be sampled.
  double mission_duration{200.0};

  void validate() const;
};

/// Default meandering channel; bounds enclose the corridor with a margin.
RiverScenario default_river(double half_width, std::uint64_t seed);

/// Channel geometry shared by every realization of one river.
class ChannelGeometry {
 public:
  ChannelGeometry(const RiverScenario& river, double cell_size = 1.0);

  const Centerline& centerline() const { return centerline_; }
  double half_width() const { return half_width_; }
  const Aabb& bounds() const { return bounds_; }
  double cell_size() const { return cell_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  /// Flat index of the raster cell containing (x, y), or npos outside bounds.
  std::size_t cell_index(double x, double y) const;
  Vec3 cell_center(std::size_t index) const;
  bool cell_in_channel(std::size_t index) const { return mask_[index] != 0; }
  bool in_channel(double x, double y) const;
  std::size_t channel_cell_count() const { return channel_cells_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  Centerline centerline_;
  double half_width_;
  Aabb bounds_;
  double cell_;
  std::size_t nx_{0};
  std::size_t ny_{0};
  std::vector<std::uint8_t> mask_;
  std::size_t channel_cells_{0};
};

/// One seeded realization: river geometry plus a generated shadow field.
class Scenario {
 public:
  Scenario(RiverScenario river, ShadowPreset preset);
  Scenario(RiverScenario river, ShadowPreset preset, std::shared_ptr<const ChannelGeometry> channel);

  const RiverScenario& river() const { return river_; }
  const ShadowPreset& preset() const { return preset_; }
  const ChannelGeometry& channel() const { return *channel_; }
  std::shared_ptr<const ChannelGeometry> channel_ptr() const { return channel_; }
  const Centerline& centerline() const { return channel_->centerline(); }
  const std::vector<ShadowBlob>& blobs() const { return blobs_; }

  /// Throws when t lies outside [0, mission_duration].
  std::vector<BlobState> blob_states(double t) const;
  BlobShadowMap shadows_at(double t) const { return BlobShadowMap(blob_states(t)); }

 private:
  void generate_blobs();

  RiverScenario river_;
  ShadowPreset preset_;
  std::shared_ptr<const ChannelGeometry> channel_;
  std::vector<ShadowBlob> blobs_;
};

struct ShadowSample {
  double time{0.0};
  std::vector<Vec3> points;
};

/// Shadowed water-surface points inside the channel on a regular grid.
ShadowSample sample_shadow_field(const Scenario& scenario, double t, double resolution = 1.0);

/// Shadowed fraction of the channel area at time t (1 m grid).
double shadowed_area_fraction(const Scenario& scenario, double t);

/// Guidance direction from the centerline: tangent plus a saturated
/// proportional correction toward the centerline. Horizontal, unit length.
struct ReferenceFieldParams {
  double normal_gain{0.05};  ///< 1/m
  double max_blend{1.0};     ///< tan of the saturation angle (45 deg)
};

Vec3 reference_field(const Scenario& scenario, const Vec3& p, const ReferenceFieldParams& params = {});
Vec3 reference_field(const ChannelGeometry& channel, const Vec3& p, const ReferenceFieldParams& params = {});

}  // namespace shadowplan
