#include "d2d/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2d/errors.hpp"

namespace d2d {
namespace {

// Odometer over {0..base-1}^n, most significant digit first.
bool next(std::vector<std::size_t>& digits, std::size_t base) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < base) return true;
    digits[i] = 0;
  }
  return false;
}

void guard(std::size_t base, std::size_t exponent) {
  std::uint64_t space = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    space *= base;
    if (space > kOracleSearchLimit)
      throw OracleGuardError("oracle search space " + std::to_string(base) +
                             "^" + std::to_string(exponent) + " exceeds " +
                             std::to_string(kOracleSearchLimit));
  }
}

bool fits(const std::vector<std::size_t>& digits, const std::vector<int>& cap) {
  std::vector<int> load(cap.size(), 0);
  for (std::size_t b : digits)
    if (++load[b] > cap[b]) return false;
  return true;
}

// Threshold-feasible candidate BSs, ranked independently of the solver by a
// full sort on (rank key, id).
std::vector<std::vector<bool>> joint_allowed(const AssociationProblem& p) {
  const std::size_t nb = p.num_bs();
  std::vector<std::vector<bool>> allowed(p.num_links(),
                                         std::vector<bool>(nb, false));
  for (std::size_t l = 0; l < p.num_links(); ++l) {
    const auto [u1, u2] = p.link_devices[l];
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t b = 0; b < nb; ++b) {
      const double key = p.candidate_rank == CandidateRank::MeanPathloss
                             ? p.loss_db(u1, b) + p.loss_db(u2, b)
                             : p.tables.device_cost_mw(u1, b) +
                                   p.tables.device_cost_mw(u2, b);
      ranked.emplace_back(key, b);
    }
    std::sort(ranked.begin(), ranked.end());
    const std::size_t n = std::min<std::size_t>(nb, p.n_closest);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t b = ranked[k].second;
      const double pair = p.tables.device_cost_mw(u1, b) +
                          p.tables.device_cost_mw(u2, b);
      allowed[l][b] = pair <= p.i_th_mw;
    }
  }
  return allowed;
}

Assignment enumerate_links(const AssociationProblem& p) {
  const std::size_t nb = p.num_bs();
  guard(nb, p.num_links());
  std::vector<std::size_t> digits(p.num_links(), 0);
  std::vector<std::size_t> best;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    if (!fits(digits, p.capacity)) continue;
    double cost = 0.0;
    for (std::size_t l = 0; l < digits.size(); ++l)
      cost += p.tables.link_cost_mw(l, digits[l]);
    if (cost < best_cost) {
      best_cost = cost;
      best = digits;
    }
  } while (next(digits, nb));
  if (best.size() != p.num_links())
    throw InfeasibleError("oracle: no assignment satisfies the capacities");

  Assignment a;
  a.serving_bs.resize(p.num_devices());
  a.joint_bs.resize(p.num_links());
  for (std::size_t l = 0; l < p.num_links(); ++l) {
    a.serving_bs[p.link_devices[l][0]] = best[l];
    a.serving_bs[p.link_devices[l][1]] = best[l];
    a.joint_bs[l] = best[l];
  }
  a.joint_count = p.num_links();
  a.objective_mw = best_cost;
  return a;
}

Assignment enumerate_devices(const AssociationProblem& p, bool hybrid) {
  const std::size_t nb = p.num_bs();
  guard(nb, p.num_devices());
  const auto allowed = hybrid ? joint_allowed(p)
                              : std::vector<std::vector<bool>>{};
  std::vector<std::size_t> digits(p.num_devices(), 0);
  std::vector<std::size_t> best;
  std::size_t best_count = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    if (!fits(digits, p.capacity)) continue;
    double cost = 0.0;
    for (std::size_t u = 0; u < digits.size(); ++u)
      cost += p.tables.device_cost_mw(u, digits[u]);
    std::size_t count = 0;
    if (hybrid) {
      for (std::size_t l = 0; l < p.num_links(); ++l) {
        const auto [u1, u2] = p.link_devices[l];
        if (digits[u1] == digits[u2] && allowed[l][digits[u1]]) ++count;
      }
    }
    const bool better = best.empty() || count > best_count ||
                        (count == best_count && cost < best_cost);
    if (better) {
      best = digits;
      best_count = count;
      best_cost = cost;
    }
  } while (next(digits, nb));
  if (best.size() != p.num_devices())
    throw InfeasibleError("oracle: no assignment satisfies the capacities");

  Assignment a;
  a.serving_bs = best;
  a.joint_bs.assign(p.num_links(), std::nullopt);
  for (std::size_t l = 0; l < p.num_links(); ++l) {
    const auto [u1, u2] = p.link_devices[l];
    const bool joint = best[u1] == best[u2] && (!hybrid || allowed[l][best[u1]]);
    if (joint) {
      a.joint_bs[l] = best[u1];
      ++a.joint_count;
    }
  }
  a.objective_mw = best_cost;
  return a;
}

}  // namespace

Assignment oracle_exhaustive(const AssociationProblem& p, Scheme scheme) {
  if (p.tables.device_cost_mw.empty() && p.num_devices() > 0)
    throw InterferenceError("interference undefined with a single BS");
  switch (scheme) {
    case Scheme::JD: return enumerate_links(p);
    case Scheme::DD: return enumerate_devices(p, false);
    case Scheme::HD: return enumerate_devices(p, true);
    case Scheme::JC: break;
  }
  throw std::invalid_argument("oracle does not cover JC (rule-based scheme)");
}

}  // namespace d2d
