#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "d2d/assoc.hpp"
#include "d2d/matrix.hpp"
#include "d2d/radio.hpp"
#include "d2d/sim.hpp"
#include "d2d/topology.hpp"

namespace d2d {

// Hand-specified deployment: BS tiers/powers plus a device x BS loss
// matrix, devices 2l and 2l+1 forming link l.
struct ExplicitScenario {
  std::vector<BaseStation> base_stations;
  Matrix<double> loss_db;
};

// Everything a command needs. Sections of the INI file map one-to-one onto
// the members; absent keys keep the defaults below.
struct RunConfig {
  TopologyConfig topology;
  PowerControlParams power_control;
  ProblemConfig problem;
  MonteCarloConfig monte_carlo;
  std::optional<ExplicitScenario> scenario;
};

// INI text with [topology], [channel], [power_control], [problem],
// [monte_carlo] and [scenario] sections. Unknown sections or keys and
// unparsable values throw ConfigError naming the offending key.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// The scenario a config describes: the explicit one if present, otherwise
// a generated drop with the given seed.
Scenario scenario_from_config(const RunConfig& cfg, std::uint64_t seed);

}  // namespace d2d
