#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "d2d/matrix.hpp"

namespace d2d {

struct CapacitatedAssignment {
  std::vector<std::size_t> bs_of;  // per item, in input order
  double total_cost = 0.0;
};

// Exact minimum-cost assignment of items (rows of `costs`) to BSs (columns)
// with at most capacity[b] items per BS, i.e. a transportation problem with
// unit supplies. Solved by successive shortest paths over the BS-level
// residual graph: an item whose cheapest BS still has room goes there
// directly; otherwise Bellman-Ford finds the cheapest chain of displacements.
// Ties favor the lowest BS id, items are inserted in increasing id order.
// Throws InfeasibleError when the capacities cannot host every item.
CapacitatedAssignment min_cost_assign(const Matrix<double>& costs,
                                      std::span<const int> capacity);

// Restricted to the listed rows of `costs`; bs_of follows `items` order.
CapacitatedAssignment min_cost_assign(const Matrix<double>& costs,
                                      std::span<const int> capacity,
                                      std::span<const std::size_t> items);

}  // namespace d2d
