#pragma once

#include "nodetsp/geometry.hpp"

namespace nodetsp {

inline constexpr std::size_t kHeldKarpMaxNodes = 16;

struct ExactSolution {
  Tour tour;
  double length = 0.0;  // tour_length(inst, tour)
};

/// Held-Karp dynamic program, O(n^2 2^n) time and O(n 2^n) memory.
/// Returns an optimal order starting at node 0, oriented so that the second
/// node has a smaller index than the last.
/// Throws Error(kSizeCap) for n > kHeldKarpMaxNodes.
ExactSolution held_karp(const TspInstance& inst);

}  // namespace nodetsp
