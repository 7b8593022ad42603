#include "nodetsp/local_search.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "nodetsp/error.hpp"

namespace nodetsp {
namespace {

// Reverse positions a..b, or equivalently the complementary arc, whichever is
// shorter. Either way the resulting cycle is the same.
void reverse_segment(std::vector<int>& order, std::size_t a, std::size_t b) {
  const std::size_t n = order.size();
  std::size_t inner = b - a + 1;
  if (2 * inner > n) {
    // complement: b+1 .. a-1 (cyclic)
    std::size_t lo = (b + 1) % n;
    std::size_t hi = (a + n - 1) % n;
    std::size_t len = n - inner;
    for (std::size_t s = 0; s < len / 2; ++s) {
      std::swap(order[lo], order[hi]);
      lo = (lo + 1) % n;
      hi = (hi + n - 1) % n;
    }
    return;
  }
  std::reverse(order.begin() + a, order.begin() + b + 1);
}

}  // namespace

double improvement_delta(const TspInstance& inst, const Tour& tour, std::size_t a,
                         std::size_t b) {
  const std::size_t n = tour.size();
  if (a == 0 && b == n - 1) return 0.0;
  const auto& t = tour.order;
  const int before = t[(a + n - 1) % n];
  const int first = t[a];
  const int last = t[b];
  const int after = t[(b + 1) % n];
  return inst.dist(before, last) + inst.dist(first, after) - inst.dist(before, first) -
         inst.dist(last, after);
}

std::optional<std::chrono::duration<double>> default_two_opt_time_limit(std::size_t n) {
  if (n <= 200) return std::nullopt;
  return std::chrono::duration<double>(60.0);
}

TwoOptResult two_opt_search(const TspInstance& inst, Tour tour,
                            std::optional<std::chrono::duration<double>> time_limit) {
  require_valid_tour(inst, tour);
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const std::size_t n = tour.size();

  TwoOptResult result;
  bool improved = true;
  std::size_t checks = 0;
  while (improved) {
    improved = false;
    ++result.sweeps;
    for (std::size_t a = 0; a + 1 < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const double delta = improvement_delta(inst, tour, a, b);
        if (delta < -kImprovementEpsilon) {
          reverse_segment(tour.order, a, b);
          result.accepted_delta += delta;
          ++result.moves;
          improved = true;
        }
        if (time_limit && (++checks & 0x3ff) == 0 && clock::now() - start >= *time_limit) {
          result.hit_time_limit = true;
          result.tour = std::move(tour);
          return result;
        }
      }
    }
  }
  result.tour = std::move(tour);
  return result;
}

Tour two_opt(const TspInstance& inst, Tour tour,
             std::optional<std::chrono::duration<double>> time_limit) {
  return two_opt_search(inst, std::move(tour), time_limit).tour;
}

Tour multi_start_two_opt(const TspInstance& inst, std::size_t restarts, std::uint64_t seed) {
  const std::size_t n = inst.size();
  std::mt19937_64 rng(seed);
  Tour best;
  double best_length = 0.0;
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    Tour start;
    start.order.resize(n);
    std::iota(start.order.begin(), start.order.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(start.order[i], start.order[rng() % (i + 1)]);
    }
    Tour local = two_opt(inst, std::move(start));
    const double length = tour_length(inst, local);
    if (best.order.empty() || length < best_length) {
      best = std::move(local);
      best_length = length;
    }
  }
  return best;
}

}  // namespace nodetsp
