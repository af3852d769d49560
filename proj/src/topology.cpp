#include "d2d/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "d2d/errors.hpp"
#include "d2d/rng.hpp"

namespace d2d {
namespace {

constexpr int kMaxPlacementAttempts = 10000;
constexpr int kMaxBearingAttempts = 64;

bool inside(Point p, double width, double height) {
  return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
}

// Macros sit at the centers of a coarse grid, filled row by row.
std::vector<Point> macro_grid(std::size_t count, double width, double height) {
  std::vector<Point> out;
  if (count == 0) return out;
  const auto cols = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(count))));
  const std::size_t rows = (count + cols - 1) / cols;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t r = i / cols;
    const std::size_t c = i % cols;
    // The last row may be partially filled; center it.
    const std::size_t in_row = (r + 1 == rows) ? count - r * cols : cols;
    const double cell_w = width / static_cast<double>(in_row);
    const double cell_h = height / static_cast<double>(rows);
    out.push_back({(static_cast<double>(c) + 0.5) * cell_w,
                   (static_cast<double>(r) + 0.5) * cell_h});
  }
  return out;
}

Point drop_first_endpoint(const TopologyConfig& cfg,
                          const std::vector<BaseStation>& bss, Rng& rng) {
  const bool hotspot =
      cfg.hotspot_fraction > 0.0 && rng.uniform() < cfg.hotspot_fraction;
  std::vector<std::size_t> smalls;
  if (hotspot) {
    for (const auto& bs : bss)
      if (bs.kind == BsKind::Small) smalls.push_back(bs.id);
  }
  if (!hotspot || smalls.empty()) {
    return {rng.uniform(0.0, cfg.area_width_m),
            rng.uniform(0.0, cfg.area_height_m)};
  }
  const Point center = bss[smalls[rng.below(smalls.size())]].position;
  for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
    // Uniform over the disc.
    const double r = cfg.hotspot_radius_m * std::sqrt(rng.uniform());
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    const Point p{center.x + r * std::cos(theta),
                  center.y + r * std::sin(theta)};
    if (inside(p, cfg.area_width_m, cfg.area_height_m)) return p;
  }
  return center;
}

Point drop_second_endpoint(const TopologyConfig& cfg, Point first,
                           double length, Rng& rng) {
  for (int attempt = 0; attempt < kMaxBearingAttempts; ++attempt) {
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    double dx = length * std::cos(theta);
    double dy = length * std::sin(theta);
    // Mirror the bearing at the boundary so the length is preserved.
    if (first.x + dx < 0.0 || first.x + dx > cfg.area_width_m) dx = -dx;
    if (first.y + dy < 0.0 || first.y + dy > cfg.area_height_m) dy = -dy;
    const Point p{first.x + dx, first.y + dy};
    if (inside(p, cfg.area_width_m, cfg.area_height_m)) return p;
  }
  throw GenerationError("link length " + std::to_string(length) +
                        " m does not fit inside the " +
                        std::to_string(cfg.area_width_m) + " x " +
                        std::to_string(cfg.area_height_m) + " m area");
}

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double pathloss_db(const ChannelModel& model, BsKind kind, double distance_m,
                   double shadow_db) {
  const double d_km = std::max(distance_m, 1.0) / 1000.0;
  const bool macro = kind == BsKind::Macro;
  const double intercept =
      macro ? model.pl_intercept_macro_db : model.pl_intercept_small_db;
  const double exponent =
      macro ? model.pl_exponent_macro : model.pl_exponent_small;
  const double loss = intercept + 10.0 * exponent * std::log10(d_km) + shadow_db;
  return std::max(model.min_coupling_loss_db, loss);
}

double pathloss_db(const ChannelModel& model, const BaseStation& bs,
                   const DeviceNode& device, double shadow_db) {
  return pathloss_db(model, bs.kind, distance(bs.position, device.position),
                     shadow_db);
}

Scenario generate_scenario(const TopologyConfig& cfg, std::uint64_t seed) {
  if (!(cfg.area_width_m > 0.0) || !(cfg.area_height_m > 0.0))
    throw GenerationError("area dimensions must be positive");
  if (cfg.num_macro + cfg.num_small == 0)
    throw GenerationError("at least one base station is required");
  if (cfg.channel.pl_exponent_macro <= 0.0 ||
      cfg.channel.pl_exponent_small <= 0.0)
    throw GenerationError("pathloss exponents must be positive");

  Rng rng(seed);
  Scenario sc;
  sc.seed = seed;

  for (const Point& p :
       macro_grid(cfg.num_macro, cfg.area_width_m, cfg.area_height_m)) {
    for (const auto& other : sc.base_stations) {
      if (distance(p, other.position) < cfg.min_bs_spacing_m)
        throw GenerationError(
            "area too small: macro grid violates min_bs_spacing_m");
    }
    sc.base_stations.push_back(
        {sc.base_stations.size(), BsKind::Macro, p, cfg.macro_tx_power_dbm});
  }

  for (std::size_t i = 0; i < cfg.num_small; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed;
         ++attempt) {
      const Point p{rng.uniform(0.0, cfg.area_width_m),
                    rng.uniform(0.0, cfg.area_height_m)};
      const bool clear = std::all_of(
          sc.base_stations.begin(), sc.base_stations.end(),
          [&](const BaseStation& bs) {
            return distance(p, bs.position) >= cfg.min_bs_spacing_m;
          });
      if (clear) {
        sc.base_stations.push_back(
            {sc.base_stations.size(), BsKind::Small, p, cfg.small_tx_power_dbm});
        placed = true;
      }
    }
    if (!placed)
      throw GenerationError(
          "area too small for " + std::to_string(cfg.num_macro + cfg.num_small) +
          " base stations with min_bs_spacing_m = " +
          std::to_string(cfg.min_bs_spacing_m));
  }

  sc.links.reserve(cfg.num_links);
  sc.devices.reserve(2 * cfg.num_links);
  for (std::size_t l = 0; l < cfg.num_links; ++l) {
    double length = cfg.link_length_m;
    if (cfg.length_range)
      length = rng.uniform(cfg.length_range->min_m, cfg.length_range->max_m);
    if (!(length > 0.0))
      throw GenerationError("link length must be positive");
    const Point a = drop_first_endpoint(cfg, sc.base_stations, rng);
    const Point b = drop_second_endpoint(cfg, a, length, rng);
    const std::size_t u1 = sc.devices.size();
    sc.devices.push_back({u1, l, a});
    sc.devices.push_back({u1 + 1, l, b});
    sc.links.push_back({l, {u1, u1 + 1}, length});
  }

  // Shadowing is i.i.d. per (device, BS); drawn row-major after all
  // geometry so the draw order is fixed.
  sc.gain.loss_db = Matrix<double>(sc.devices.size(), sc.base_stations.size());
  for (const auto& dev : sc.devices) {
    for (const auto& bs : sc.base_stations) {
      const double sigma = bs.kind == BsKind::Macro
                               ? cfg.channel.shadowing_sigma_macro_db
                               : cfg.channel.shadowing_sigma_small_db;
      const double shadow = sigma > 0.0 ? rng.normal(0.0, sigma) : 0.0;
      sc.gain.loss_db(dev.id, bs.id) = pathloss_db(cfg.channel, bs, dev, shadow);
    }
  }
  return sc;
}

Scenario make_explicit_scenario(std::vector<BaseStation> base_stations,
                                Matrix<double> loss_db) {
  if (loss_db.cols() != base_stations.size())
    throw GenerationError("loss matrix has " + std::to_string(loss_db.cols()) +
                          " columns but there are " +
                          std::to_string(base_stations.size()) +
                          " base stations");
  if (loss_db.rows() % 2 != 0)
    throw GenerationError("loss matrix needs an even number of device rows");
  Scenario sc;
  for (std::size_t b = 0; b < base_stations.size(); ++b)
    base_stations[b].id = b;
  sc.base_stations = std::move(base_stations);
  const std::size_t num_links = loss_db.rows() / 2;
  for (std::size_t l = 0; l < num_links; ++l) {
    sc.devices.push_back({2 * l, l, {}});
    sc.devices.push_back({2 * l + 1, l, {}});
    sc.links.push_back({l, {2 * l, 2 * l + 1}, 0.0});
  }
  sc.gain.loss_db = std::move(loss_db);
  return sc;
}

}  // namespace d2d
