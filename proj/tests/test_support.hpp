#pragma once

// Shared generators and brute-force oracles for the test suites. Nothing here
// calls into the code paths the oracles are used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "nodetsp/geometry.hpp"

namespace nodetsp::testkit {

inline TspInstance corners() {
  return TspInstance({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, "corners");
}

inline Tour random_permutation(std::size_t n, std::mt19937_64& rng) {
  Tour t;
  t.order.resize(n);
  std::iota(t.order.begin(), t.order.end(), 0);
  std::shuffle(t.order.begin(), t.order.end(), rng);
  return t;
}

inline double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Plain sequential sum of the cycle, independent of tour_length's ordering.
inline double naive_cycle_length(const TspInstance& inst, const std::vector<int>& order) {
  double total = 0.0;
  for (std::size_t p = 0; p < order.size(); ++p) {
    const Point a = inst.nodes()[order[p]];
    const Point b = inst.nodes()[order[(p + 1) % order.size()]];
    total += std::hypot(a.x - b.x, a.y - b.y);
  }
  return total;
}

// Full sort by (distance, index) of every candidate.
inline std::vector<int> sorted_candidates(const TspInstance& inst, Point from,
                                          const std::vector<int>& exclude) {
  std::vector<std::pair<double, int>> all;
  for (int i = 0; i < static_cast<int>(inst.size()); ++i) {
    if (std::find(exclude.begin(), exclude.end(), i) != exclude.end()) continue;
    const Point p = inst.nodes()[i];
    all.emplace_back(std::sqrt((from.x - p.x) * (from.x - p.x) + (from.y - p.y) * (from.y - p.y)), i);
  }
  std::sort(all.begin(), all.end());
  std::vector<int> out;
  for (auto& [d, i] : all) out.push_back(i);
  return out;
}

// Exhaustive search over all (n-1)! orders with node 0 fixed; returns the
// minimum of tour_length over them.
struct BruteForceResult {
  double length = std::numeric_limits<double>::infinity();
  Tour tour;
};

inline BruteForceResult brute_force_optimum(const TspInstance& inst) {
  std::vector<int> rest(inst.size() - 1);
  std::iota(rest.begin(), rest.end(), 1);
  BruteForceResult best;
  do {
    Tour t;
    t.order.push_back(0);
    t.order.insert(t.order.end(), rest.begin(), rest.end());
    const double len = tour_length(inst, t);
    if (len < best.length) {
      best.length = len;
      best.tour = std::move(t);
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

}  // namespace nodetsp::testkit

#include <gtest/gtest.h>

#include "nodetsp/error.hpp"

// Asserts that `stmt` throws nodetsp::Error with the given code.
#define EXPECT_ERROR_CODE(stmt, expected_code)                                   \
  do {                                                                           \
    try {                                                                        \
      stmt;                                                                      \
      ADD_FAILURE() << "expected " << ::nodetsp::to_string(expected_code)        \
                    << ", nothing thrown";                                       \
    } catch (const ::nodetsp::Error& e) {                                        \
      EXPECT_EQ(e.code(), expected_code)                                         \
          << "got " << ::nodetsp::to_string(e.code()) << ": " << e.what();       \
    }                                                                            \
  } while (false)
