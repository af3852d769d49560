// Branch-and-bound for the hybrid scheme: maximize the number of joint
// links subject to the per-link interference threshold, then minimize the
// total device interference.
//
// Devices of non-joint links may go to any BS, so a set of joint
// placements is completable iff every BS keeps 2 * joint_b <= residual_b
// (total capacity already covers all devices). The best reachable joint
// count of a node is therefore a bipartite b-matching of the undecided
// eligible links onto their threshold-feasible BSs with floor(residual/2)
// slots each, which this search uses as an exact count bound.
//
// A node fixes, for some links, either "joint at BS b" or "disjoint". The
// remaining devices are placed by min_cost_assign over the residual
// capacity, giving an interference lower bound and a feasible candidate.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "d2d/assoc.hpp"
#include "d2d/errors.hpp"
#include "d2d/min_cost_assign.hpp"

namespace d2d {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

bool cheaper(double a, double b) {
  return a < b - 1e-12 * std::max(std::abs(a), std::abs(b));
}

// Kuhn-style augmenting paths for a b-matching of links onto BSs.
class LinkMatching {
 public:
  LinkMatching(const std::vector<std::vector<std::size_t>>& adj,
               std::vector<int> slots)
      : adj_(adj), slots_(std::move(slots)), holders_(slots_.size()) {}

  std::size_t run(const std::vector<std::size_t>& links) {
    std::size_t matched = 0;
    for (std::size_t l : links) {
      seen_.assign(slots_.size(), false);
      if (augment(l)) ++matched;
    }
    return matched;
  }

 private:
  bool augment(std::size_t l) {
    for (std::size_t b : adj_[l]) {
      if (seen_[b]) continue;
      seen_[b] = true;
      if (static_cast<int>(holders_[b].size()) < slots_[b]) {
        holders_[b].push_back(l);
        return true;
      }
      for (std::size_t& other : holders_[b]) {
        const std::size_t moved = other;
        other = l;
        if (augment(moved)) return true;
        other = moved;
      }
    }
    return false;
  }

  const std::vector<std::vector<std::size_t>>& adj_;
  std::vector<int> slots_;
  std::vector<std::vector<std::size_t>> holders_;
  std::vector<bool> seen_;
};

class HybridSearch {
 public:
  explicit HybridSearch(const AssociationProblem& p) : p_(p) {
    const std::size_t nl = p.num_links();
    feasible_.resize(nl);
    for (std::size_t l = 0; l < nl; ++l) {
      for (std::size_t b : hd_candidates(p, l))
        if (pair_interference_mw(p, l, b) <= p.i_th_mw) feasible_[l].push_back(b);
      std::stable_sort(feasible_[l].begin(), feasible_[l].end(),
                       [&](std::size_t x, std::size_t y) {
                         return cheaper(pair_interference_mw(p, l, x),
                                        pair_interference_mw(p, l, y));
                       });
    }
    decision_.assign(nl, kUndecided);
    residual_ = p.capacity;
  }

  Assignment run() {
    seed_incumbent();
    explore();
    Assignment a;
    a.serving_bs = best_serving_;
    a.joint_bs.assign(p_.num_links(), std::nullopt);
    for (std::size_t l = 0; l < p_.num_links(); ++l)
      if (best_joint_[l] != kNone) a.joint_bs[l] = best_joint_[l];
    a.joint_count = best_count_;
    a.objective_mw = best_cost_;
    a.optimal = !budget_hit_;
    return a;
  }

 private:
  static constexpr std::size_t kUndecided = kNone - 1;
  static constexpr std::size_t kDisjoint = kNone;

  bool eligible(std::size_t l) const { return !feasible_[l].empty(); }
  bool fixed_joint(std::size_t l) const {
    return decision_[l] != kUndecided && decision_[l] != kDisjoint;
  }

  bool beats_incumbent(std::size_t count, double cost) const {
    if (!have_incumbent_) return true;
    if (count != best_count_) return count > best_count_;
    return cheaper(cost, best_cost_);
  }

  void offer(std::vector<std::size_t> serving, std::vector<std::size_t> joint,
             std::size_t count, double cost) {
    if (!beats_incumbent(count, cost)) return;
    have_incumbent_ = true;
    best_serving_ = std::move(serving);
    best_joint_ = std::move(joint);
    best_count_ = count;
    best_cost_ = cost;
  }

  std::size_t joint_count_bound() const {
    std::vector<std::size_t> open;
    for (std::size_t l = 0; l < p_.num_links(); ++l)
      if (decision_[l] == kUndecided && eligible(l)) open.push_back(l);
    std::vector<int> slots(residual_.size());
    for (std::size_t b = 0; b < slots.size(); ++b)
      slots[b] = std::max(residual_[b], 0) / 2;
    return LinkMatching(feasible_, std::move(slots)).run(open);
  }

  // Completes a set of joint placements (link -> BS, kNone = free) by
  // transporting all other devices, and offers the result.
  void complete_and_offer(const std::vector<std::size_t>& joint_of) {
    std::vector<int> cap = p_.capacity;
    std::vector<std::size_t> free_devices;
    std::vector<std::size_t> serving(p_.num_devices(), 0);
    double cost = 0.0;
    for (std::size_t l = 0; l < p_.num_links(); ++l) {
      const auto [u1, u2] = p_.link_devices[l];
      if (joint_of[l] != kNone) {
        cap[joint_of[l]] -= 2;
        serving[u1] = serving[u2] = joint_of[l];
        cost += pair_interference_mw(p_, l, joint_of[l]);
      } else {
        free_devices.push_back(u1);
        free_devices.push_back(u2);
      }
    }
    if (std::any_of(cap.begin(), cap.end(), [](int c) { return c < 0; })) return;
    CapacitatedAssignment flow;
    try {
      flow = min_cost_assign(p_.tables.device_cost_mw, cap, free_devices);
    } catch (const InfeasibleError&) {
      return;
    }
    for (std::size_t k = 0; k < free_devices.size(); ++k)
      serving[free_devices[k]] = flow.bs_of[k];
    offer_labelled(std::move(serving), cost + flow.total_cost, joint_of);
  }

  // Flags every link that ended up co-located at a feasible BS as joint.
  void offer_labelled(std::vector<std::size_t> serving, double cost,
                      const std::vector<std::size_t>& pinned) {
    std::vector<std::size_t> joint(p_.num_links(), kNone);
    std::size_t count = 0;
    for (std::size_t l = 0; l < p_.num_links(); ++l) {
      const auto [u1, u2] = p_.link_devices[l];
      if (pinned[l] != kNone ||
          (serving[u1] == serving[u2] &&
           std::find(feasible_[l].begin(), feasible_[l].end(), serving[u1]) !=
               feasible_[l].end())) {
        joint[l] = serving[u1];
        ++count;
      }
    }
    offer(std::move(serving), std::move(joint), count, cost);
  }

  // Min-cost maximum matching of eligible links onto feasible BSs (pair
  // slots), then transport for everyone else. Unmatched links fall on a
  // dummy column priced above any achievable matched total.
  void seed_incumbent() {
    std::vector<std::size_t> open;
    double max_pair = 0.0;
    for (std::size_t l = 0; l < p_.num_links(); ++l) {
      if (!eligible(l)) continue;
      open.push_back(l);
      for (std::size_t b : feasible_[l])
        max_pair = std::max(max_pair, pair_interference_mw(p_, l, b));
    }
    std::vector<std::size_t> joint_of(p_.num_links(), kNone);
    if (!open.empty()) {
      const std::size_t nb = p_.num_bs();
      const double dummy = (static_cast<double>(open.size()) + 2.0) * max_pair + 1.0;
      Matrix<double> costs(p_.num_links(), nb + 1, 4.0 * dummy);
      for (std::size_t l : open) {
        for (std::size_t b : feasible_[l]) costs(l, b) = pair_interference_mw(p_, l, b);
        costs(l, nb) = dummy;
      }
      std::vector<int> slots(nb + 1);
      for (std::size_t b = 0; b < nb; ++b) slots[b] = std::max(p_.capacity[b], 0) / 2;
      slots[nb] = static_cast<int>(open.size());
      const auto match = min_cost_assign(costs, slots, open);
      for (std::size_t k = 0; k < open.size(); ++k)
        if (match.bs_of[k] < nb) joint_of[open[k]] = match.bs_of[k];
    }
    complete_and_offer(joint_of);
  }

  // Every undecided eligible link joint at its cheapest feasible BS, every
  // other device at its cheapest BS. If that fits it is the subtree optimum
  // and is offered (returns kNone). Otherwise returns the link to branch on.
  std::size_t relaxed_completion(std::size_t fixed_count, double fixed_cost) {
    const auto& dc = p_.tables.device_cost_mw;
    const std::size_t nb = p_.num_bs();
    std::vector<int> load(nb, 0);
    std::vector<std::size_t> serving(p_.num_devices(), 0);
    std::vector<std::size_t> joint(p_.num_links(), kNone);
    std::vector<std::size_t> preferred(p_.num_links(), kNone);
    std::size_t count = fixed_count;
    double cost = fixed_cost;
    for (std::size_t l = 0; l < p_.num_links(); ++l) {
      const auto [u1, u2] = p_.link_devices[l];
      if (fixed_joint(l)) {
        serving[u1] = serving[u2] = joint[l] = decision_[l];
        continue;
      }
      if (decision_[l] == kUndecided && eligible(l)) {
        const std::size_t b = feasible_[l].front();
        serving[u1] = serving[u2] = joint[l] = preferred[l] = b;
        load[b] += 2;
        ++count;
        cost += pair_interference_mw(p_, l, b);
        continue;
      }
      for (std::size_t u : {u1, u2}) {
        std::size_t best = 0;
        for (std::size_t b = 1; b < nb; ++b)
          if (dc(u, b) < dc(u, best)) best = b;
        serving[u] = best;
        ++load[best];
        cost += dc(u, best);
      }
    }
    std::size_t worst = kNone;
    for (std::size_t b = 0; b < nb; ++b) {
      const int over = load[b] - residual_[b];
      if (over > 0 && (worst == kNone || over > load[worst] - residual_[worst]))
        worst = b;
    }
    if (worst == kNone) {
      offer(std::move(serving), std::move(joint), count, cost);
      return kNone;
    }
    for (std::size_t l = 0; l < p_.num_links(); ++l)
      if (preferred[l] == worst) return l;
    for (std::size_t l = 0; l < p_.num_links(); ++l)
      if (decision_[l] == kUndecided && eligible(l)) return l;
    return kUndecided;
  }

  void explore() {
    if (++nodes_ > p_.node_budget) {
      budget_hit_ = true;
      return;
    }

    std::size_t fixed_count = 0;
    double fixed_cost = 0.0;
    for (std::size_t l = 0; l < p_.num_links(); ++l) {
      if (fixed_joint(l)) {
        ++fixed_count;
        fixed_cost += pair_interference_mw(p_, l, decision_[l]);
      }
    }
    const std::size_t count_ub = fixed_count + joint_count_bound();
    if (have_incumbent_ && count_ub < best_count_) return;

    const std::size_t branch_link = relaxed_completion(fixed_count, fixed_cost);
    if (branch_link == kNone) return;

    std::vector<std::size_t> free_devices;
    for (std::size_t l = 0; l < p_.num_links(); ++l) {
      if (!fixed_joint(l)) {
        free_devices.push_back(p_.link_devices[l][0]);
        free_devices.push_back(p_.link_devices[l][1]);
      }
    }
    CapacitatedAssignment flow;
    try {
      flow = min_cost_assign(p_.tables.device_cost_mw, residual_, free_devices);
    } catch (const InfeasibleError&) {
      return;
    }
    const double cost_lb = fixed_cost + flow.total_cost;
    {
      std::vector<std::size_t> serving(p_.num_devices(), 0);
      std::vector<std::size_t> pinned(p_.num_links(), kNone);
      for (std::size_t k = 0; k < free_devices.size(); ++k)
        serving[free_devices[k]] = flow.bs_of[k];
      for (std::size_t l = 0; l < p_.num_links(); ++l) {
        if (!fixed_joint(l)) continue;
        pinned[l] = decision_[l];
        serving[p_.link_devices[l][0]] = serving[p_.link_devices[l][1]] = decision_[l];
      }
      offer_labelled(std::move(serving), cost_lb, pinned);
    }

    if (count_ub <= best_count_ && !cheaper(cost_lb, best_cost_)) return;
    if (branch_link == kUndecided) return;

    const std::size_t l = branch_link;
    for (std::size_t b : feasible_[l]) {
      if (residual_[b] < 2) continue;
      decision_[l] = b;
      residual_[b] -= 2;
      explore();
      residual_[b] += 2;
      decision_[l] = kUndecided;
      if (budget_hit_) return;
    }
    decision_[l] = kDisjoint;
    explore();
    decision_[l] = kUndecided;
  }

  const AssociationProblem& p_;
  std::vector<std::vector<std::size_t>> feasible_;
  std::vector<std::size_t> decision_;
  std::vector<int> residual_;

  bool have_incumbent_ = false;
  std::vector<std::size_t> best_serving_;
  std::vector<std::size_t> best_joint_;
  std::size_t best_count_ = 0;
  double best_cost_ = 0.0;

  std::size_t nodes_ = 0;
  bool budget_hit_ = false;
};

}  // namespace

Assignment solve_hd(const AssociationProblem& p) {
  if (p.tables.device_cost_mw.empty() && p.num_devices() > 0)
    throw InterferenceError("interference undefined with a single BS");
  long long total = 0;
  for (int c : p.capacity) total += std::max(c, 0);
  if (total < static_cast<long long>(p.num_devices()))
    throw InfeasibleError("capacity constraint violated: sum of K_b = " +
                          std::to_string(total) + " cannot host " +
                          std::to_string(p.num_devices()) + " devices");
  return HybridSearch(p).run();
}

}  // namespace d2d
