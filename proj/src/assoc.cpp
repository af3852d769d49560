#include "d2d/assoc.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "d2d/errors.hpp"
#include "d2d/min_cost_assign.hpp"

namespace d2d {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_capacity(const AssociationProblem& p, std::size_t demand,
                      std::string_view unit) {
  long long total = 0;
  for (int c : p.capacity) total += std::max(c, 0);
  if (total < static_cast<long long>(demand))
    throw InfeasibleError("capacity constraint violated: sum of K_b = " +
                          std::to_string(total) + " cannot host " +
                          std::to_string(demand) + " " + std::string(unit));
}

void require_tables(const AssociationProblem& p) {
  if (p.tables.device_cost_mw.empty() && p.num_devices() > 0)
    throw InterferenceError("interference undefined with a single BS");
}

void finish_joint_flags_from_colocation(const AssociationProblem& p,
                                        Assignment& a) {
  a.joint_bs.assign(p.num_links(), std::nullopt);
  a.joint_count = 0;
  for (std::size_t l = 0; l < p.num_links(); ++l) {
    const auto [u1, u2] = p.link_devices[l];
    if (a.serving_bs[u1] == a.serving_bs[u2]) {
      a.joint_bs[l] = a.serving_bs[u1];
      ++a.joint_count;
    }
  }
}

Assignment from_link_choice(const AssociationProblem& p,
                            const std::vector<std::size_t>& link_bs) {
  Assignment a;
  a.serving_bs.assign(p.num_devices(), 0);
  a.joint_bs.assign(p.num_links(), std::nullopt);
  for (std::size_t l = 0; l < p.num_links(); ++l) {
    const auto [u1, u2] = p.link_devices[l];
    a.serving_bs[u1] = a.serving_bs[u2] = link_bs[l];
    a.joint_bs[l] = link_bs[l];
  }
  a.joint_count = p.num_links();
  return a;
}

double link_objective(const AssociationProblem& p, const Assignment& a) {
  double sum = 0.0;
  for (std::size_t l = 0; l < p.num_links(); ++l)
    sum += p.tables.link_cost_mw(l, *a.joint_bs[l]);
  return sum;
}

}  // namespace

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::JC: return "JC";
    case Scheme::JD: return "JD";
    case Scheme::DD: return "DD";
    case Scheme::HD: return "HD";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "jc") return Scheme::JC;
  if (lower == "jd") return Scheme::JD;
  if (lower == "dd") return Scheme::DD;
  if (lower == "hd") return Scheme::HD;
  throw ConfigError("unknown scheme '" + std::string(name) +
                    "' (expected jc, jd, dd or hd)");
}

AssociationProblem make_problem(const Scenario& scenario,
                                const PowerControlParams& params,
                                const ProblemConfig& cfg) {
  const std::size_t nb = scenario.num_bs();
  if (cfg.n_closest < 1) throw ConfigError("problem.n_closest must be >= 1");
  if (!cfg.capacity_override.empty() && cfg.capacity_override.size() != nb)
    throw ConfigError("problem.capacity_override has " +
                      std::to_string(cfg.capacity_override.size()) +
                      " entries for " + std::to_string(nb) + " BSs");

  AssociationProblem p;
  for (const auto& link : scenario.links) p.link_devices.push_back(link.device_ids);
  if (nb >= 2) p.tables = build_tables(scenario, params);
  p.capacity = cfg.capacity_override.empty()
                   ? std::vector<int>(nb, cfg.capacity_per_bs)
                   : cfg.capacity_override;
  p.i_th_mw = dbm_to_mw(cfg.i_th_dbm);
  p.n_closest = cfg.n_closest;
  p.jc_rule = cfg.jc_rule;
  p.candidate_rank = cfg.candidate_rank;
  p.node_budget = cfg.node_budget;
  p.loss_db = scenario.gain.loss_db;
  p.dl_rx_dbm = Matrix<double>(scenario.devices.size(), nb);
  for (std::size_t u = 0; u < scenario.devices.size(); ++u)
    for (std::size_t b = 0; b < nb; ++b)
      p.dl_rx_dbm(u, b) =
          dl_rx_power_dbm(scenario.base_stations[b], scenario.gain.gain_db(u, b));
  return p;
}

Assignment solve_jc(const AssociationProblem& p) {
  require_capacity(p, p.num_links(), "links");
  const std::size_t nb = p.num_bs();
  const std::size_t nl = p.num_links();

  Matrix<double> pref(nl, nb);
  std::vector<double> best_pref(nl, -std::numeric_limits<double>::infinity());
  for (std::size_t l = 0; l < nl; ++l) {
    const auto [u1, u2] = p.link_devices[l];
    for (std::size_t b = 0; b < nb; ++b) {
      const double a = dbm_to_mw(p.dl_rx_dbm(u1, b));
      const double c = dbm_to_mw(p.dl_rx_dbm(u2, b));
      pref(l, b) = p.jc_rule == JcRule::LinearMean ? 0.5 * (a + c) : std::min(a, c);
      best_pref[l] = std::max(best_pref[l], pref(l, b));
    }
  }

  std::vector<std::size_t> order(nl);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return best_pref[x] > best_pref[y];
  });

  std::vector<int> residual = p.capacity;
  std::vector<std::size_t> link_bs(nl, 0);
  for (std::size_t l : order) {
    std::size_t chosen = nb;
    for (std::size_t b = 0; b < nb; ++b) {
      if (residual[b] <= 0) continue;
      if (chosen == nb || pref(l, b) > pref(l, chosen)) chosen = b;
    }
    link_bs[l] = chosen;
    --residual[chosen];
  }

  Assignment a = from_link_choice(p, link_bs);
  a.objective_mw = p.tables.link_cost_mw.empty() ? kNaN : link_objective(p, a);
  return a;
}

Assignment solve_jd(const AssociationProblem& p) {
  require_tables(p);
  require_capacity(p, p.num_links(), "links");
  const auto flow = min_cost_assign(p.tables.link_cost_mw, p.capacity);
  Assignment a = from_link_choice(p, flow.bs_of);
  a.objective_mw = link_objective(p, a);
  return a;
}

Assignment solve_dd(const AssociationProblem& p) {
  require_tables(p);
  require_capacity(p, p.num_devices(), "devices");
  const auto flow = min_cost_assign(p.tables.device_cost_mw, p.capacity);
  Assignment a;
  a.serving_bs = flow.bs_of;
  finish_joint_flags_from_colocation(p, a);
  a.objective_mw = total_interference_mw(p, a);
  return a;
}

Assignment solve(const AssociationProblem& p, Scheme scheme) {
  switch (scheme) {
    case Scheme::JC: return solve_jc(p);
    case Scheme::JD: return solve_jd(p);
    case Scheme::DD: return solve_dd(p);
    case Scheme::HD: return solve_hd(p);
  }
  throw std::logic_error("unhandled scheme");
}

double total_interference_mw(const AssociationProblem& p, const Assignment& a) {
  double sum = 0.0;
  for (std::size_t u = 0; u < a.serving_bs.size(); ++u)
    sum += p.tables.device_cost_mw(u, a.serving_bs[u]);
  return sum;
}

std::size_t resource_blocks(const AssociationProblem& p, const Assignment& a) {
  std::size_t rbs = 0;
  for (const auto& [u1, u2] : p.link_devices)
    rbs += a.serving_bs[u1] == a.serving_bs[u2] ? 1 : 2;
  return rbs;
}

std::vector<std::size_t> hd_candidates(const AssociationProblem& p,
                                       std::size_t l) {
  const auto [u1, u2] = p.link_devices[l];
  std::vector<std::size_t> order(p.num_bs());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&](std::size_t b) {
    return p.candidate_rank == CandidateRank::MeanPathloss
               ? 0.5 * (p.loss_db(u1, b) + p.loss_db(u2, b))
               : pair_interference_mw(p, l, b);
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return key(x) < key(y);
  });
  order.resize(std::min<std::size_t>(order.size(),
                                     static_cast<std::size_t>(p.n_closest)));
  return order;
}

double pair_interference_mw(const AssociationProblem& p, std::size_t l,
                            std::size_t bs) {
  const auto [u1, u2] = p.link_devices[l];
  return p.tables.device_cost_mw(u1, bs) + p.tables.device_cost_mw(u2, bs);
}

std::vector<std::string> validate_assignment(const AssociationProblem& p,
                                             Scheme scheme,
                                             const Assignment& a) {
  std::vector<std::string> issues;
  const std::size_t nb = p.num_bs();
  if (a.serving_bs.size() != p.num_devices()) {
    issues.push_back("serving_bs has wrong length");
    return issues;
  }
  if (a.joint_bs.size() != p.num_links()) {
    issues.push_back("joint_bs has wrong length");
    return issues;
  }
  for (std::size_t u = 0; u < a.serving_bs.size(); ++u)
    if (a.serving_bs[u] >= nb)
      issues.push_back("device " + std::to_string(u) + " has no valid serving BS");
  if (!issues.empty()) return issues;

  const bool link_granular = scheme == Scheme::JC || scheme == Scheme::JD;
  std::vector<int> load(nb, 0);
  std::size_t joint = 0;
  for (std::size_t l = 0; l < p.num_links(); ++l) {
    const auto [u1, u2] = p.link_devices[l];
    const auto& jb = a.joint_bs[l];
    if (jb) {
      ++joint;
      if (a.serving_bs[u1] != *jb || a.serving_bs[u2] != *jb)
        issues.push_back("link " + std::to_string(l) +
                         " flagged joint but devices not both at BS " +
                         std::to_string(*jb));
    }
    if (link_granular) {
      if (!jb) issues.push_back("link " + std::to_string(l) + " not joint");
      ++load[a.serving_bs[u1]];
    } else {
      ++load[a.serving_bs[u1]];
      ++load[a.serving_bs[u2]];
    }
    if (scheme == Scheme::DD && !jb && a.serving_bs[u1] == a.serving_bs[u2])
      issues.push_back("link " + std::to_string(l) +
                       " co-associated but not flagged");
    if (scheme == Scheme::HD && jb) {
      const auto cands = hd_candidates(p, l);
      if (std::find(cands.begin(), cands.end(), *jb) == cands.end())
        issues.push_back("link " + std::to_string(l) +
                         " joint at a BS outside its candidates");
      if (pair_interference_mw(p, l, *jb) > p.i_th_mw)
        issues.push_back("link " + std::to_string(l) +
                         " joint above the interference threshold");
    }
  }
  if (joint != a.joint_count) issues.push_back("joint_count mismatch");
  for (std::size_t b = 0; b < nb; ++b)
    if (load[b] > p.capacity[b])
      issues.push_back("BS " + std::to_string(b) + " load " +
                       std::to_string(load[b]) + " exceeds K_b = " +
                       std::to_string(p.capacity[b]));
  return issues;
}

}  // namespace d2d
