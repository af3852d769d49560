#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "d2d/matrix.hpp"

namespace d2d {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

double distance(Point a, Point b);

enum class BsKind { Macro, Small };

struct BaseStation {
  std::size_t id = 0;
  BsKind kind = BsKind::Small;
  Point position;
  double tx_power_dbm = 30.0;  // DL transmit power
  bool operator==(const BaseStation&) const = default;
};

struct DeviceNode {
  std::size_t id = 0;
  std::size_t link_id = 0;
  Point position;
  bool operator==(const DeviceNode&) const = default;
};

struct D2DLink {
  std::size_t id = 0;
  std::array<std::size_t, 2> device_ids{};
  double length_m = 0.0;
  bool operator==(const D2DLink&) const = default;
};

// Log-distance pathloss with log-normal shadowing, one parameter set per
// BS tier: L = intercept + 10 * exponent * log10(d_km) + shadow.
struct ChannelModel {
  double pl_intercept_macro_db = 128.1;
  double pl_exponent_macro = 3.76;
  double pl_intercept_small_db = 140.7;
  double pl_exponent_small = 3.67;
  double shadowing_sigma_macro_db = 8.0;
  double shadowing_sigma_small_db = 10.0;
  double min_coupling_loss_db = 45.0;
};

// Pathloss in dB between every device (rows) and BS (columns).
// Gains are the negated losses.
struct GainMatrix {
  Matrix<double> loss_db;

  double loss(std::size_t device, std::size_t bs) const {
    return loss_db(device, bs);
  }
  double gain_db(std::size_t device, std::size_t bs) const {
    return -loss_db(device, bs);
  }
  std::size_t num_devices() const { return loss_db.rows(); }
  std::size_t num_bs() const { return loss_db.cols(); }
  bool operator==(const GainMatrix&) const = default;
};

struct Scenario {
  std::vector<BaseStation> base_stations;
  std::vector<D2DLink> links;
  std::vector<DeviceNode> devices;
  GainMatrix gain;
  std::uint64_t seed = 0;

  std::size_t num_bs() const { return base_stations.size(); }
  bool operator==(const Scenario&) const = default;
};

struct LinkLengthRange {
  double min_m = 10.0;
  double max_m = 150.0;
};

struct TopologyConfig {
  double area_width_m = 1000.0;
  double area_height_m = 1000.0;
  std::size_t num_macro = 2;
  std::size_t num_small = 21;
  std::size_t num_links = 336;
  // Fixed drop length; when `length_range` is set it takes precedence and
  // each link draws its length uniformly from the range.
  double link_length_m = 50.0;
  std::optional<LinkLengthRange> length_range;
  double min_bs_spacing_m = 40.0;
  double macro_tx_power_dbm = 46.0;
  double small_tx_power_dbm = 30.0;
  // Recorded for reference only; the pathloss intercepts already absorb it.
  double carrier_frequency_ghz = 2.6;
  // Fraction of first endpoints dropped inside a disc around a random small
  // cell instead of uniformly over the area.
  double hotspot_fraction = 0.0;
  double hotspot_radius_m = 50.0;
  ChannelModel channel;
};

// Pathloss between `bs` and `device` with the given shadowing draw, using
// the tier parameters matching bs.kind. Distances below 1 m are clamped.
double pathloss_db(const ChannelModel& model, const BaseStation& bs,
                   const DeviceNode& device, double shadow_db);

// Same formula from a raw distance.
double pathloss_db(const ChannelModel& model, BsKind kind, double distance_m,
                   double shadow_db);

// Drops BSs and D2D links and fills the gain matrix. Pure function of
// (cfg, seed). Throws GenerationError when the area cannot host the BSs at
// the configured spacing or a link cannot fit inside the area.
Scenario generate_scenario(const TopologyConfig& cfg, std::uint64_t seed);

// Builds a scenario from an explicit loss matrix (rows = devices, with
// devices 2l and 2l+1 forming link l). Positions are left at the origin.
Scenario make_explicit_scenario(std::vector<BaseStation> base_stations,
                                Matrix<double> loss_db);

}  // namespace d2d
