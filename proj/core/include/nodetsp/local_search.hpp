#pragma once

#include <chrono>
#include <cstdint>
#include <optional>

#include "nodetsp/geometry.hpp"

namespace nodetsp {

inline constexpr double kImprovementEpsilon = 1e-12;

/// Length change from reversing tour positions a..b (0 <= a < b < n):
/// d(t[a-1], t[b]) + d(t[a], t[b+1]) - d(t[a-1], t[a]) - d(t[b], t[b+1]),
/// indices cyclic. Reversing the whole tour, (0, n-1), is a no-op: 0.
double improvement_delta(const TspInstance& inst, const Tour& tour, std::size_t a,
                         std::size_t b);

struct TwoOptResult {
  Tour tour;
  std::size_t sweeps = 0;        // full sweeps started
  std::size_t moves = 0;         // accepted reversals
  double accepted_delta = 0.0;   // sum of accepted deltas (negative)
  bool hit_time_limit = false;
};

// None for n <= 200, 60 s otherwise.
std::optional<std::chrono::duration<double>> default_two_opt_time_limit(std::size_t n);

/// First-improvement 2-opt. Sweeps all position pairs (a, b), applying any
/// reversal with delta < -kImprovementEpsilon as soon as it is found, until a
/// sweep finds nothing or the time limit expires. The shorter of the two arcs
/// is the one physically reversed.
TwoOptResult two_opt_search(const TspInstance& inst, Tour tour,
                            std::optional<std::chrono::duration<double>> time_limit = std::nullopt);

Tour two_opt(const TspInstance& inst, Tour tour,
             std::optional<std::chrono::duration<double>> time_limit = std::nullopt);

// Best of `restarts` 2-opt runs from random starting orders (no time limit).
// Starting orders come from a Fisher-Yates shuffle driven by
// std::mt19937_64(seed), so results are reproducible across platforms.
Tour multi_start_two_opt(const TspInstance& inst, std::size_t restarts, std::uint64_t seed);

}  // namespace nodetsp
