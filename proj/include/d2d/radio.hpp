#pragma once

#include <cstddef>

#include "d2d/matrix.hpp"
#include "d2d/topology.hpp"

namespace d2d {

// Fractional uplink power control: P = min(P_max, 10 log10(M) + P0 + alpha L).
struct PowerControlParams {
  double p_max_dbm = 23.0;
  double p0_dbm = -90.0;
  double alpha = 0.8;
  int num_prb = 1;
};

// Throws ConfigError if alpha is outside [0, 1] or num_prb < 1.
void validate(const PowerControlParams& params);

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

double tx_power_dbm(const PowerControlParams& params, double loss_db);

double dl_rx_power_dbm(const BaseStation& bs, double gain_db);

// Worst-case received power (mW) at any non-serving BS from device `u`
// when it is served by `bs` and transmits at its power-controlled level.
double interference_device_mw(const Scenario& scenario,
                              const PowerControlParams& params, std::size_t u,
                              std::size_t bs);

// Linear mean of the two devices' terms when link `l` is served jointly.
double interference_link_mw(const Scenario& scenario,
                            const PowerControlParams& params, std::size_t l,
                            std::size_t bs);

// Per-(device, BS) and per-(link, BS) interference costs in linear mW.
struct InterferenceTables {
  Matrix<double> device_cost_mw;
  Matrix<double> link_cost_mw;

  std::size_t num_bs() const { return device_cost_mw.cols(); }
};

// Throws InterferenceError when the scenario has fewer than two BSs.
InterferenceTables build_tables(const Scenario& scenario,
                                const PowerControlParams& params);

}  // namespace d2d
