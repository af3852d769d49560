#include "d2d/radio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "d2d/errors.hpp"

namespace d2d {
namespace {

void require_two_bs(const Scenario& scenario) {
  if (scenario.num_bs() < 2)
    throw InterferenceError("interference undefined with a single BS");
}

}  // namespace

void validate(const PowerControlParams& params) {
  if (!(params.alpha >= 0.0 && params.alpha <= 1.0))
    throw ConfigError("power_control.alpha must lie in [0, 1]");
  if (params.num_prb < 1)
    throw ConfigError("power_control.num_prb must be >= 1");
  if (!std::isfinite(params.p_max_dbm) || !std::isfinite(params.p0_dbm))
    throw ConfigError("power_control.p_max_dbm and p0_dbm must be finite");
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double tx_power_dbm(const PowerControlParams& params, double loss_db) {
  const double controlled = 10.0 * std::log10(static_cast<double>(params.num_prb)) +
                            params.p0_dbm + params.alpha * loss_db;
  return std::min(params.p_max_dbm, controlled);
}

double dl_rx_power_dbm(const BaseStation& bs, double gain_db) {
  return bs.tx_power_dbm + gain_db;
}

double interference_device_mw(const Scenario& scenario,
                              const PowerControlParams& params, std::size_t u,
                              std::size_t bs) {
  require_two_bs(scenario);
  const auto& g = scenario.gain;
  const double tx = tx_power_dbm(params, g.loss(u, bs));
  double strongest = -std::numeric_limits<double>::infinity();
  for (std::size_t other = 0; other < scenario.num_bs(); ++other) {
    if (other == bs) continue;
    strongest = std::max(strongest, g.gain_db(u, other));
  }
  return dbm_to_mw(tx + strongest);
}

double interference_link_mw(const Scenario& scenario,
                            const PowerControlParams& params, std::size_t l,
                            std::size_t bs) {
  const auto& link = scenario.links.at(l);
  return 0.5 * (interference_device_mw(scenario, params, link.device_ids[0], bs) +
                interference_device_mw(scenario, params, link.device_ids[1], bs));
}

InterferenceTables build_tables(const Scenario& scenario,
                                const PowerControlParams& params) {
  require_two_bs(scenario);
  const std::size_t nb = scenario.num_bs();
  const std::size_t nu = scenario.devices.size();
  const auto& g = scenario.gain;

  InterferenceTables t;
  t.device_cost_mw = Matrix<double>(nu, nb);
  for (std::size_t u = 0; u < nu; ++u) {
    // The strongest non-serving BS is the overall strongest unless that one
    // is serving, in which case it is the runner-up.
    std::size_t best = 0;
    for (std::size_t b = 1; b < nb; ++b)
      if (g.gain_db(u, b) > g.gain_db(u, best)) best = b;
    double runner_up = -std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < nb; ++b)
      if (b != best) runner_up = std::max(runner_up, g.gain_db(u, b));
    for (std::size_t b = 0; b < nb; ++b) {
      const double strongest = (b == best) ? runner_up : g.gain_db(u, best);
      t.device_cost_mw(u, b) =
          dbm_to_mw(tx_power_dbm(params, g.loss(u, b)) + strongest);
    }
  }

  t.link_cost_mw = Matrix<double>(scenario.links.size(), nb);
  for (const auto& link : scenario.links) {
    for (std::size_t b = 0; b < nb; ++b) {
      t.link_cost_mw(link.id, b) =
          0.5 * (t.device_cost_mw(link.device_ids[0], b) +
                 t.device_cost_mw(link.device_ids[1], b));
    }
  }
  return t;
}

}  // namespace d2d
