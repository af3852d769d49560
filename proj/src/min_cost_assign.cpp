#include "d2d/min_cost_assign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "d2d/errors.hpp"

namespace d2d {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Strict improvement with a guard relative to the magnitude of the terms
// summed along the path, so round-off cannot manufacture negative cycles out
// of zero-cost ones.
bool improves(double candidate, double current, double magnitude) {
  if (current == kInf) return candidate < kInf;
  return candidate < current - 1e-12 * magnitude;
}

std::size_t cheapest(const Matrix<double>& costs, std::size_t item) {
  std::size_t best = 0;
  for (std::size_t b = 1; b < costs.cols(); ++b)
    if (costs(item, b) < costs(item, best)) best = b;
  return best;
}

class Transport {
 public:
  Transport(const Matrix<double>& costs, std::span<const int> capacity,
            std::span<const std::size_t> items)
      : costs_(costs),
        items_(items),
        residual_(capacity.begin(), capacity.end()),
        slot_(items.size(), kNone),
        members_(capacity.size()) {}

  void insert(std::size_t k) {
    const std::size_t item = items_[k];
    const std::size_t direct = cheapest(costs_, item);
    if (residual_[direct] > 0) {
      place(k, direct);
      return;
    }
    shortest_path_insert(k);
  }

  std::vector<std::size_t> result() const { return slot_; }

 private:
  void place(std::size_t k, std::size_t b) {
    slot_[k] = b;
    members_[b].push_back(k);
    --residual_[b];
  }

  void move(std::size_t k, std::size_t from, std::size_t to) {
    auto& m = members_[from];
    m.erase(std::find(m.begin(), m.end(), k));
    ++residual_[from];
    place(k, to);
  }

  void shortest_path_insert(std::size_t k) {
    const std::size_t nb = residual_.size();
    const std::size_t item = items_[k];

    // Cheapest single displacement b -> b2 and the item that makes it.
    Matrix<double> hop(nb, nb, kInf);
    Matrix<double> hop_mag(nb, nb, 0.0);
    Matrix<std::size_t> mover(nb, nb, kNone);
    for (std::size_t b = 0; b < nb; ++b) {
      std::vector<std::size_t> ordered = members_[b];
      std::sort(ordered.begin(), ordered.end());
      for (std::size_t j : ordered) {
        const std::size_t jitem = items_[j];
        for (std::size_t b2 = 0; b2 < nb; ++b2) {
          if (b2 == b) continue;
          const double w = costs_(jitem, b2) - costs_(jitem, b);
          if (w < hop(b, b2)) {
            hop(b, b2) = w;
            hop_mag(b, b2) =
                std::max(std::abs(costs_(jitem, b2)), std::abs(costs_(jitem, b)));
            mover(b, b2) = j;
          }
        }
      }
    }

    std::vector<double> dist(nb);
    std::vector<double> mag(nb);
    std::vector<std::size_t> pred(nb, kNone);
    for (std::size_t b = 0; b < nb; ++b) {
      dist[b] = costs_(item, b);
      mag[b] = std::abs(dist[b]);
    }
    for (std::size_t round = 0; round + 1 < nb; ++round) {
      bool changed = false;
      for (std::size_t b = 0; b < nb; ++b) {
        if (dist[b] == kInf) continue;
        for (std::size_t b2 = 0; b2 < nb; ++b2) {
          if (mover(b, b2) == kNone) continue;
          const double nd = dist[b] + hop(b, b2);
          const double nm = mag[b] + hop_mag(b, b2);
          if (improves(nd, dist[b2], std::max(nm, mag[b2]))) {
            dist[b2] = nd;
            mag[b2] = nm;
            pred[b2] = b;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }

    std::size_t sink = kNone;
    for (std::size_t b = 0; b < nb; ++b) {
      if (residual_[b] <= 0) continue;
      if (sink == kNone ||
          improves(dist[b], dist[sink], std::max(mag[b], mag[sink])))
        sink = b;
    }
    if (sink == kNone)
      throw InfeasibleError("no BS has spare capacity for item " +
                            std::to_string(item));

    // Walk back from the sink, shifting each displaced item one hop.
    std::vector<std::size_t> chain{sink};
    while (pred[chain.back()] != kNone) {
      chain.push_back(pred[chain.back()]);
      if (chain.size() > nb)
        throw std::logic_error("min_cost_assign: cycle in shortest-path tree");
    }
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      const std::size_t to = chain[i];
      const std::size_t from = chain[i + 1];
      move(mover(from, to), from, to);
    }
    place(k, chain.back());
  }

  const Matrix<double>& costs_;
  std::span<const std::size_t> items_;
  std::vector<int> residual_;
  std::vector<std::size_t> slot_;
  std::vector<std::vector<std::size_t>> members_;
};

}  // namespace

CapacitatedAssignment min_cost_assign(const Matrix<double>& costs,
                                      std::span<const int> capacity,
                                      std::span<const std::size_t> items) {
  if (capacity.size() != costs.cols())
    throw std::invalid_argument("min_cost_assign: capacity size mismatch");
  long long total_capacity = 0;
  for (int c : capacity) total_capacity += std::max(c, 0);
  if (total_capacity < static_cast<long long>(items.size()))
    throw InfeasibleError("total capacity " + std::to_string(total_capacity) +
                          " < " + std::to_string(items.size()) +
                          " items to assign");

  CapacitatedAssignment out;
  if (items.empty()) return out;

  // Fast path: everyone at their cheapest BS fits.
  std::vector<int> load(capacity.size(), 0);
  std::vector<std::size_t> greedy(items.size());
  for (std::size_t k = 0; k < items.size(); ++k) {
    greedy[k] = cheapest(costs, items[k]);
    ++load[greedy[k]];
  }
  bool fits = true;
  for (std::size_t b = 0; b < capacity.size(); ++b)
    fits = fits && load[b] <= capacity[b];

  if (fits) {
    out.bs_of = std::move(greedy);
  } else {
    Transport t(costs, capacity, items);
    for (std::size_t k = 0; k < items.size(); ++k) t.insert(k);
    out.bs_of = t.result();
  }
  for (std::size_t k = 0; k < items.size(); ++k)
    out.total_cost += costs(items[k], out.bs_of[k]);
  return out;
}

CapacitatedAssignment min_cost_assign(const Matrix<double>& costs,
                                      std::span<const int> capacity) {
  std::vector<std::size_t> all(costs.rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return min_cost_assign(costs, capacity, all);
}

}  // namespace d2d
