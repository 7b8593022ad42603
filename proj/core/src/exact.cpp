#include "nodetsp/exact.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "nodetsp/error.hpp"

namespace nodetsp {

// remaining[mask][j]: cheapest way to finish from node j+1, having visited the
// nodes in mask (bit b = node b+1, j's bit set), and return to node 0. Storing
// completion costs instead of prefix costs lets the forward walk pick the
// smallest admissible next node at every step.
ExactSolution held_karp(const TspInstance& inst) {
  const std::size_t n = inst.size();
  if (n > kHeldKarpMaxNodes) {
    throw Error(ErrorCode::kSizeCap, "held_karp is capped at " +
                                         std::to_string(kHeldKarpMaxNodes) + " nodes, got " +
                                         std::to_string(n));
  }
  const std::size_t m = n - 1;
  const std::size_t full = (std::size_t{1} << m) - 1;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> remaining((full + 1) * m, kInf);
  auto at = [&](std::size_t mask, std::size_t j) -> double& { return remaining[mask * m + j]; };

  for (std::size_t j = 0; j < m; ++j) at(full, j) = inst.dist(j + 1, 0);
  for (std::size_t mask = full; mask-- > 1;) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask >> j & 1)) continue;
      double best = kInf;
      for (std::size_t k = 0; k < m; ++k) {
        if (mask >> k & 1) continue;
        best = std::min(best, inst.dist(j + 1, k + 1) + at(mask | std::size_t{1} << k, k));
      }
      at(mask, j) = best;
    }
  }

  double best = kInf;
  for (std::size_t k = 0; k < m; ++k) {
    best = std::min(best, inst.dist(0, k + 1) + at(std::size_t{1} << k, k));
  }

  Tour tour;
  tour.order.reserve(n);
  tour.order.push_back(0);
  std::size_t mask = 0;
  std::size_t cur = 0;  // node id, 0 = depot
  double target = best;
  while (mask != full) {
    for (std::size_t k = 0; k < m; ++k) {
      if (mask >> k & 1) continue;
      const std::size_t next_mask = mask | std::size_t{1} << k;
      if (inst.dist(cur, k + 1) + at(next_mask, k) == target) {
        tour.order.push_back(static_cast<int>(k + 1));
        mask = next_mask;
        cur = k + 1;
        target = at(next_mask, k);
        break;
      }
    }
  }
  // The two orientations tie exactly in tour_length but not always in the DP
  // sums; fix the orientation explicitly.
  if (tour.order[1] > tour.order.back()) std::reverse(tour.order.begin() + 1, tour.order.end());
  return {tour, tour_length(inst, tour)};
}

}  // namespace nodetsp
